#pragma once

// Hausdorff-dimension machinery: closed-form a_k/b_k sequences, Bowen-ratio
// estimate with convergence diagnostics, covering-measure bounds, and an
// independent box-counting estimator over sampled limit points.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <thread>
#include <unordered_set>
#include <vector>

#include "najulia/errors.hpp"
#include "najulia/ncifs.hpp"
#include "najulia/seqcore.hpp"

namespace najulia {

struct AbTerms {
    double a = 0.0;
    double b = 0.0;
};

// a_k = (1/k)(m_k+1) log 2,  b_k = a_k + (1/k)(1 - 2^-(m_k+1)) log(|c_k|-2).
// Natural logs throughout; the ratio a_k/b_k is base-invariant.
inline AbTerms ab_terms(const ParamSpec& spec, std::int64_t k) {
    if (k < 1)
        throw PreconditionError("ab_terms requires k >= 1");
    auto [c, m] = spec.param(k);
    const double ac = std::abs(c);
    if (!(ac > 4.0))
        throw PreconditionError("ab_terms requires |c_k| > 4 at k = " + std::to_string(k));
    const double kk = static_cast<double>(k);
    const double a = static_cast<double>(m + 1) * std::numbers::ln2 / kk;
    const double b = a + (1.0 - std::exp2(-static_cast<double>(m + 1))) * std::log(ac - 2.0) / kk;
    return {a, b};
}

struct TrendPoint {
    std::int64_t k = 0;
    double a = 0.0;
    double b = 0.0;
    double ratio = 0.0;
};

struct CoverBound {
    double theorem_bound = 4.0; // H^1(J) <= 4, level-independent
    double sharp_bound = 4.0;   // 2^(M_k) * 4 * prod_j sup_j
};

// Computed in log space; the count 2^(M_k) and the contraction product
// overflow/underflow binary64 separately for large k but not combined.
inline CoverBound cover_bound(const ParamSpec& spec, std::int64_t k) {
    if (k < 0)
        throw PreconditionError("cover_bound requires k >= 0");
    if (k == 0)
        return {4.0, 4.0};
    double log_sharp = static_cast<double>(spec.checkpoint(k)) * std::numbers::ln2 + std::log(4.0);
    for (std::int64_t j = 1; j <= k; ++j)
        log_sharp += std::log(branch_deriv_sup(spec, j));
    return {4.0, std::exp(log_sharp)};
}

struct DimensionReport {
    std::int64_t K = 0;
    double a_K = 0.0;
    double b_K = 0.0;
    double ratio = 0.0;
    std::vector<TrendPoint> trend; // k = 1, 2, 4, ..., K
    // Bowen's formula needs lim a_k and lim b_k to exist; reported, not assumed.
    bool limits_stabilized = false;
    double rel_change_a = 0.0; // |a_K - a_{K/10}| / a_K
    double rel_change_b = 0.0;
    double cover_bound_theorem = 4.0;
    double cover_bound_sharp = 4.0;
};

inline DimensionReport bowen_estimate(const ParamSpec& spec, std::int64_t K) {
    if (K < 1)
        throw PreconditionError("bowen_estimate requires K >= 1");
    DimensionReport rep;
    rep.K = K;
    for (std::int64_t k = 1; k < K; k *= 2) {
        const auto t = ab_terms(spec, k);
        rep.trend.push_back({k, t.a, t.b, t.a / t.b});
    }
    const auto tK = ab_terms(spec, K);
    rep.trend.push_back({K, tK.a, tK.b, tK.a / tK.b});
    rep.a_K = tK.a;
    rep.b_K = tK.b;
    rep.ratio = tK.a / tK.b;

    const std::int64_t k_prev = std::max<std::int64_t>(1, K / 10);
    const auto tp = ab_terms(spec, k_prev);
    rep.rel_change_a = std::abs(tK.a - tp.a) / std::abs(tK.a);
    rep.rel_change_b = std::abs(tK.b - tp.b) / std::abs(tK.b);
    rep.limits_stabilized = rep.rel_change_a < 1e-2 && rep.rel_change_b < 1e-2;

    const auto cb = cover_bound(spec, K);
    rep.cover_bound_theorem = cb.theorem_bound;
    rep.cover_bound_sharp = cb.sharp_bound;
    return rep;
}

// ---------------------------------------------------------------------------
// Box counting.

struct BoxCountResult {
    std::vector<double> scales;      // sorted descending
    std::vector<std::int64_t> counts; // N(eps) per scale
    double slope = 0.0;              // least squares of log N vs log(1/eps)
    double r_squared = 1.0;
};

namespace detail {

inline std::uint64_t cell_key(Complex p, double eps) {
    const double fx = std::floor(p.real() / eps);
    const double fy = std::floor(p.imag() / eps);
    if (std::abs(fx) >= 2147483647.0 || std::abs(fy) >= 2147483647.0)
        throw PreconditionError("box-count scale too small relative to the point extent");
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
}

inline std::int64_t count_cells(std::span<const Complex> points, double eps, int threads) {
    if (threads <= 1 || points.size() < 4096) {
        std::unordered_set<std::uint64_t> cells;
        cells.reserve(points.size());
        for (const Complex& p : points)
            cells.insert(cell_key(p, eps));
        return static_cast<std::int64_t>(cells.size());
    }
    // partition points, merge per-worker cell sets; the union is order-free,
    // so the count is identical for any worker count
    const std::size_t n = points.size();
    const std::size_t nw = static_cast<std::size_t>(threads);
    std::vector<std::unordered_set<std::uint64_t>> local(nw);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            const std::size_t lo = n * w / nw;
            const std::size_t hi = n * (w + 1) / nw;
            auto& set = local[w];
            set.reserve(hi - lo);
            for (std::size_t i = lo; i < hi; ++i)
                set.insert(cell_key(points[i], eps));
        });
    }
    for (auto& t : pool)
        t.join();
    std::unordered_set<std::uint64_t> cells;
    for (auto& set : local)
        cells.insert(set.begin(), set.end());
    return static_cast<std::int64_t>(cells.size());
}

} // namespace detail

inline BoxCountResult box_count(std::span<const Complex> points, std::vector<double> scales,
                                int threads = 1) {
    if (scales.size() < 2)
        throw PreconditionError("box_count needs at least 2 scales");
    for (double e : scales)
        if (!(e > 0.0))
            throw PreconditionError("box-count scales must be positive");
    if (points.size() < 2)
        throw DegenerateInput("box_count needs at least 2 distinct points");
    bool distinct = false;
    for (const Complex& p : points)
        if (p != points[0]) {
            distinct = true;
            break;
        }
    if (!distinct)
        throw DegenerateInput("box_count input points are all identical");

    BoxCountResult res;
    std::sort(scales.begin(), scales.end(), std::greater<double>());
    res.scales = std::move(scales);
    res.counts.reserve(res.scales.size());
    for (double e : res.scales)
        res.counts.push_back(detail::count_cells(points, e, threads));

    const std::size_t n = res.scales.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(1.0 / res.scales[i]);
        const double y = std::log(static_cast<double>(res.counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    res.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    double ss_res = 0, ss_tot = 0;
    const double xbar = sx / dn;
    const double ybar = sy / dn;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(1.0 / res.scales[i]);
        const double y = std::log(static_cast<double>(res.counts[i]));
        const double yhat = ybar + res.slope * (x - xbar);
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ybar) * (y - ybar);
    }
    res.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return res;
}

// Default scale ladder: the cylinder radius bounds at levels ceil(k/2) .. k,
// the window where sampled points faithfully proxy cylinders.
inline std::vector<double> default_box_scales(const ParamSpec& spec, std::int64_t level) {
    if (level < 2)
        throw PreconditionError("default scales need level >= 2");
    std::vector<double> scales;
    for (std::int64_t j = (level + 1) / 2; j <= level; ++j)
        scales.push_back(cylinder_radius_bound(spec, j));
    return scales;
}

} // namespace najulia
