#include "sstdma/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace sstdma::analysis {

static void check_sn(double s, int n) {
    if (!(s >= 0.0)) throw std::invalid_argument("analysis: load ratio s must be >= 0");
    if (n < 2) throw std::invalid_argument("analysis: period count n must be >= 2");
}

void ChainParams::validate() const {
    auto prob = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!prob(f) || !prob(h) || !prob(q) || !prob(w))
        throw std::invalid_argument("ChainParams: probabilities must be in [0,1]");
    if (f + q > 1.0 + 1e-12) throw std::invalid_argument("ChainParams: f + q must be <= 1");
    if (h + w > 1.0 + 1e-12) throw std::invalid_argument("ChainParams: h + w must be <= 1");
}

double only_one_lb(double s, int n) {
    check_sn(s, n);
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += std::pow(1.0 - double(k) / n, s) / n;
    return sum;
}

double only_one_lb(double s, const std::vector<double>& rho) {
    if (!(s >= 0.0)) throw std::invalid_argument("analysis: load ratio s must be >= 0");
    if (rho.size() < 2) throw std::invalid_argument("analysis: need at least 2 periods");
    double total = 0.0;
    for (double r : rho) {
        if (!(r >= 0.0)) throw std::invalid_argument("analysis: rho entries must be >= 0");
        total += r;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("analysis: rho must sum to 1");
    double sum = 0.0, prefix = 0.0;
    for (double r : rho) {
        prefix += r;
        const double rest = prefix < 1.0 ? 1.0 - prefix : 0.0;
        sum += r * std::pow(rest, s);
    }
    return sum;
}

double q_lb(double s, int n) {
    check_sn(s, n);
    const double a = std::pow((n - 1.0) / (2.0 * n), s);
    const double b = std::pow(1.0 - 1.0 / n, s + 1.0) / (s + 1.0);
    return std::max(a, b);
}

double local_bound_eq3(double s, int n) {
    check_sn(s, n);
    const double a = std::pow(2.0 * n / (n - 1.0), s);
    const double b = (s + 1.0) / n * std::pow(n / (n - 1.0), s + 1.0);
    return std::min(a, b);
}

double local_bound_from_q(double s, int n) { return 1.0 / q_lb(s, n); }

std::array<double, 3> stationary(const ChainParams& p) {
    p.validate();
    const double pi3_num = p.q * p.h + p.q * p.w + p.f * p.w;
    const double den = p.h + p.w + p.f + pi3_num;
    if (den <= 0.0) throw std::domain_error("stationary: degenerate chain (all transitions zero)");
    return {(p.h + p.w) / den, p.f / den, pi3_num / den};
}

double chain_s(const ChainParams& p) {
    p.validate();
    const double pi3_num = p.q * p.h + p.q * p.w + p.f * p.w;
    if (pi3_num <= 0.0) throw std::domain_error("chain_s: Allocated is unreachable (pi3 = 0)");
    return (p.h + p.w + p.f) / pi3_num;
}

double expected_winners_lb(long n_nodes, double s, int n) {
    if (n_nodes < 1) throw std::invalid_argument("analysis: node count must be >= 1");
    return double(n_nodes) * only_one_lb(s, n);
}

double expected_winners_lb_compact(long n_nodes, double s, int n) {
    if (n_nodes < 1) throw std::invalid_argument("analysis: node count must be >= 1");
    check_sn(s, n);
    const double a = std::pow((n - 1.0) / (2.0 * n), s);
    const double b = std::pow((n - 1.0) / double(n), s + 1.0) / (s + 1.0);
    return double(n_nodes) * std::max(a, b);
}

double global_bound(double s, int n) {
    check_sn(s, n);
    return std::pow(2.0 * n / (n - 1.0), s);
}

double expected_retransmissions(double s, int n) { return global_bound(s, n) - 1.0; }

double rounds_for_confidence(double alpha, long n_nodes, double s, int n) {
    check_sn(s, n);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("rounds_for_confidence: alpha must be in (0,1)");
    if (n_nodes < 1) throw std::invalid_argument("rounds_for_confidence: node count must be >= 1");
    const double q = std::pow((n - 1.0) / (2.0 * n), s);
    if (q >= 1.0) return 1.0;
    // 1 - (1-alpha)^(1/N) without cancellation for large N
    const double one_minus_root = -std::expm1(std::log1p(-alpha) / double(n_nodes));
    return 1.0 + std::log(one_minus_root) / std::log1p(-q);
}

double tmax_cdf_bound(double k, double q, long n_nodes) {
    if (!(k >= 1.0)) throw std::invalid_argument("tmax_cdf_bound: k must be >= 1");
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("tmax_cdf_bound: q must be in (0,1]");
    if (n_nodes < 1) throw std::invalid_argument("tmax_cdf_bound: node count must be >= 1");
    if (q == 1.0) return k > 1.0 ? 1.0 : 0.0;
    const double log_tail = (k - 1.0) * std::log1p(-q);  // log (1-q)^(k-1)
    if (log_tail >= 0.0) return 0.0;                     // k == 1
    return std::exp(double(n_nodes) * std::log1p(-std::exp(log_tail)));
}

}  // namespace sstdma::analysis
