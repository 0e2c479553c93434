#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace sstdma::analysis {

// Transition probabilities of the relative-state chain
// (Ready -> Obtaining -> Allocated):
//   q Ready->Allocated, f Ready->Obtaining, w Obtaining->Allocated,
//   h Obtaining->Ready; Allocated returns to Ready with probability 1.
struct ChainParams {
    double f = 0, h = 0, q = 0, w = 0;
    void validate() const;  // throws std::invalid_argument
};

// Probability that a node with load ratio s = d/T wins its slot within one
// round, lower-bounded with uniform period choice 1/n:
//   sum_{k=1..n} (1/n) (1 - k/n)^s      (0^0 = 1, so s = 0 gives 1)
double only_one_lb(double s, int n);

// Same sum for an arbitrary period distribution rho (rho_k > 0, sum = 1).
double only_one_lb(double s, const std::vector<double>& rho);

// Compact lower bound on the win probability:
//   max{ ((n-1)/(2n))^s , (1/(s+1)) (1 - 1/n)^(s+1) }
double q_lb(double s, int n);

// Expected rounds for one node to settle, two closed forms:
//   min{ (2n/(n-1))^s , ((s+1)/n) (n/(n-1))^(s+1) }
double local_bound_eq3(double s, int n);
// and the inverse-probability form 1 / q_lb(s, n).
double local_bound_from_q(double s, int n);

// Invariant distribution (pi_ready, pi_obtaining, pi_allocated) of the chain.
std::array<double, 3> stationary(const ChainParams& p);

// Expected rounds to first reach Allocated = 1/pi_allocated - 1
//   = (h + w + f) / (qh + qw + fw).
double chain_s(const ChainParams& p);

// Expected winners of one round among N nodes at mean load ratio s = x/T:
// the summation form and its compact max form.
double expected_winners_lb(long n_nodes, double s, int n);
double expected_winners_lb_compact(long n_nodes, double s, int n);

// Network-wide expected rounds bound (2n/(n-1))^s at the worst load ratio;
// the expected retransmission count is this value minus one.
double global_bound(double s, int n);
double expected_retransmissions(double s, int n);

// Rounds k needed so that all N nodes settle with probability >= 1-alpha:
//   k = 1 + log(1 - (1-alpha)^(1/N)) / log(1 - ((n-1)/(2n))^s)
// evaluated in log space so it stays exact up to N ~ 1e6 and beyond.
double rounds_for_confidence(double alpha, long n_nodes, double s, int n);

// P(t_max < k) lower bound for N i.i.d. geometric(q) settle times:
//   (1 - (1-q)^(k-1))^N
double tmax_cdf_bound(double k, double q, long n_nodes);

}  // namespace sstdma::analysis
