#pragma once

// Inverse branches phi_j^(k) of the windows z -> z^(2^(m_k+1)) + c_k on
// X = clD(0,2), symbolic words, cylinder approximations, limit-set sampling
// and runtime verification of the system conditions (open set, conformality,
// uniform contraction, balancedness).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "najulia/errors.hpp"
#include "najulia/seqcore.hpp"

namespace najulia {

// Universal contraction bound over all admissible parameters (worst case
// m_k = 1, |c_k| -> 4).
inline const double kEta = std::exp2(-11.0 / 4.0);

inline double eta_eps(double eps) {
    return 0.25 * std::pow(2.0 - eps, 0.25 - 1.0);
}

// Number of inverse branches 2^(m_k+1) at level k.
inline std::int64_t branch_count(const ParamSpec& spec, std::int64_t k) {
    auto [c, m] = spec.param(k);
    (void)c;
    if (m >= 62)
        throw BudgetExceeded("branch fan-out 2^" + std::to_string(m + 1) + " exceeds enumerable range");
    return std::int64_t(1) << (m + 1);
}

// sup over X of |(phi_j^(k))'| = (1/2^(m_k+1)) (|c_k|-2)^(1/2^(m_k+1) - 1);
// independent of j (balanced system).
inline double branch_deriv_sup(const ParamSpec& spec, std::int64_t k) {
    auto [c, m] = spec.param(k);
    const double inv_deg = std::exp2(-static_cast<double>(m + 1));
    return inv_deg * std::pow(std::abs(c) - 2.0, inv_deg - 1.0);
}

// r^(1/D) exp(i theta/D) with theta the argument of u chosen in the window
// (window_center - pi, window_center + pi], i.e. branch cut opposite the
// window center.
inline Complex directed_root(Complex u, double window_center, double inv_degree) {
    constexpr double pi = std::numbers::pi;
    double theta = std::arg(u);
    const double d = window_center - theta;
    if (d >= pi)
        theta += 2.0 * pi;
    else if (d < -pi)
        theta -= 2.0 * pi;
    return std::polar(std::pow(std::abs(u), inv_degree), theta * inv_degree);
}

// arg(-c_k) with the signed zero of the negation normalized, so real c > 0
// lands on +pi (not -pi) and the branch enumeration is reproducible.
inline double window_center_for(Complex c) {
    Complex mc = -c;
    if (mc.imag() == 0.0)
        mc = Complex(mc.real(), 0.0);
    return std::arg(mc);
}

// Branch j of the inverse of z -> z^(2^(m_k+1)) + c_k, defined on D(0,4).
// The cut window is centered at arg(-c_k); branch j multiplies the cut-
// adjusted principal root by exp(2 pi i j / 2^(m_k+1)).
inline Complex branch_apply(const ParamSpec& spec, std::int64_t k, std::int64_t j, Complex w) {
    constexpr double pi = std::numbers::pi;
    auto [c, m] = spec.param(k);
    if (!(std::abs(c) > 4.0))
        throw PreconditionError("branch_apply requires |c_k| > 4 at k = " + std::to_string(k));
    if (!(std::abs(w) < 4.0))
        throw DomainViolation("branch_apply input must satisfy |w| < 4");
    const std::int64_t D = branch_count(spec, k);
    if (j < 0 || j >= D)
        throw BranchIndexOutOfRange("branch index " + std::to_string(j) + " not in [0, " +
                                    std::to_string(D) + ")");
    const double inv_deg = 1.0 / static_cast<double>(D);
    const double alpha = window_center_for(c);
    const Complex root = directed_root(w - c, alpha, inv_deg);
    const double rot = 2.0 * pi * static_cast<double>(j) * inv_deg;
    return root * std::polar(1.0, rot);
}

// ---------------------------------------------------------------------------
// Words and cylinders.

struct Word {
    std::vector<std::int64_t> letters; // letters[i] indexes a branch at level i+1

    std::int64_t length() const { return static_cast<std::int64_t>(letters.size()); }
};

inline void check_word(const ParamSpec& spec, const Word& w) {
    for (std::int64_t i = 0; i < w.length(); ++i) {
        const std::int64_t D = branch_count(spec, i + 1);
        if (w.letters[static_cast<std::size_t>(i)] < 0 || w.letters[static_cast<std::size_t>(i)] >= D)
            throw BranchIndexOutOfRange("letter " + std::to_string(i) + " out of range");
    }
}

// Lexicographic enumeration: index 0 is the all-zero word, the level-1 letter
// is the most significant digit.
inline Word word_from_index(const ParamSpec& spec, std::int64_t k, std::int64_t index) {
    Word w;
    w.letters.resize(static_cast<std::size_t>(k));
    for (std::int64_t i = k; i >= 1; --i) {
        const std::int64_t D = branch_count(spec, i);
        w.letters[static_cast<std::size_t>(i - 1)] = index % D;
        index /= D;
    }
    if (index != 0)
        throw PreconditionError("word index out of range for level");
    return w;
}

inline std::int64_t index_from_word(const ParamSpec& spec, const Word& w) {
    std::int64_t idx = 0;
    for (std::int64_t i = 1; i <= w.length(); ++i)
        idx = idx * branch_count(spec, i) + w.letters[static_cast<std::size_t>(i - 1)];
    return idx;
}

// diam(X) * prod_{j<=k} sup|phi'^(j)| = 4 * prod; bounds how far X_omega can
// stray from any of its points.
inline double cylinder_radius_bound(const ParamSpec& spec, std::int64_t k) {
    double r = 4.0;
    for (std::int64_t j = 1; j <= k; ++j)
        r *= branch_deriv_sup(spec, j);
    return r;
}

struct Cylinder {
    Word word;
    Complex center{0.0, 0.0};
    double radius_bound = 4.0;
};

// phi_omega = phi_{w1}^(1) o ... o phi_{wk}^(k) applied to the anchor,
// innermost (deepest level) first.
inline Cylinder cylinder(const ParamSpec& spec, const Word& w, Complex anchor = Complex(2.0, 0.0)) {
    if (!(std::abs(anchor) <= 2.0))
        throw PreconditionError("cylinder anchor must lie in clD(0,2)");
    check_word(spec, w);
    Complex z = anchor;
    for (std::int64_t i = w.length(); i >= 1; --i)
        z = branch_apply(spec, i, w.letters[static_cast<std::size_t>(i - 1)], z);
    return {w, z, cylinder_radius_bound(spec, w.length())};
}

inline constexpr std::int64_t kDefaultEnumerationBudget = std::int64_t(1) << 24;

// All 2^(M_k) cylinder centers at level k, in lexicographic word order.
inline std::vector<Complex> limit_points(const ParamSpec& spec, std::int64_t k,
                                         Complex anchor = Complex(2.0, 0.0),
                                         std::int64_t budget = kDefaultEnumerationBudget) {
    if (k < 0)
        throw PreconditionError("level must be >= 0");
    if (!(std::abs(anchor) <= 2.0))
        throw PreconditionError("anchor must lie in clD(0,2)");
    const std::int64_t Mk = spec.checkpoint(k);
    if (Mk >= 62 || (std::int64_t(1) << Mk) > budget)
        throw BudgetExceeded("enumeration of 2^" + std::to_string(Mk) +
                             " limit points exceeds budget " + std::to_string(budget));
    std::vector<Complex> pts{anchor};
    std::vector<Complex> next;
    for (std::int64_t level = k; level >= 1; --level) {
        const std::int64_t D = branch_count(spec, level);
        next.clear();
        next.reserve(pts.size() * static_cast<std::size_t>(D));
        // new letter becomes the slowest-varying index: lexicographic order
        for (std::int64_t j = 0; j < D; ++j)
            for (const Complex& p : pts)
                next.push_back(branch_apply(spec, level, j, p));
        pts.swap(next);
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Runtime verification of the system conditions.

struct SystemCheck {
    bool open_set_ok = false;
    bool conformality_ok = false;
    bool contraction_ok = false;
    bool balanced_ok = false;
    double epsilon = 0.0;
    double eta_eps = 0.0;
    double min_branch_clearance = 0.0; // smallest gap between adjacent level images
    double distortion_ratio = 1.0;     // max sampled max/min derivative of composed maps
    bool pass() const { return open_set_ok && conformality_ok && contraction_ok && balanced_ok; }
};

namespace detail {

inline double fd_branch_deriv(const ParamSpec& spec, std::int64_t k, std::int64_t j, Complex w,
                              double h = 1e-6) {
    const Complex hp(h, 0.0);
    return std::abs(branch_apply(spec, k, j, w + hp) - branch_apply(spec, k, j, w - hp)) / (2.0 * h);
}

// analytic |phi'^(k)| at u, same for every branch index
inline double branch_deriv_at(const ParamSpec& spec, std::int64_t k, Complex u) {
    auto [c, m] = spec.param(k);
    const double inv_deg = std::exp2(-static_cast<double>(m + 1));
    return inv_deg * std::pow(std::abs(u - c), inv_deg - 1.0);
}

} // namespace detail

inline SystemCheck verify_system(const ParamSpec& spec, std::int64_t k_max, double eps,
                                 std::int64_t samples = 4096) {
    constexpr double pi = std::numbers::pi;
    if (!(eps > 0.0 && eps <= 1.0))
        throw PreconditionError("epsilon must lie in (0, 1]");
    const double ee = eta_eps(eps);
    if (!(ee < 1.0))
        throw PreconditionError("eta_eps must be < 1");
    if (k_max < 1 || samples < 64)
        throw PreconditionError("need k_max >= 1 and samples >= 64");

    SystemCheck chk;
    chk.epsilon = eps;
    chk.eta_eps = ee;
    chk.contraction_ok = true;
    chk.conformality_ok = true;
    chk.open_set_ok = true;
    chk.balanced_ok = true;
    chk.min_branch_clearance = std::numeric_limits<double>::infinity();

    std::vector<Complex> boundary(static_cast<std::size_t>(samples));
    for (std::int64_t i = 0; i < samples; ++i)
        boundary[static_cast<std::size_t>(i)] =
            std::polar(2.0, 2.0 * pi * static_cast<double>(i) / static_cast<double>(samples));

    for (std::int64_t k = 1; k <= k_max; ++k) {
        const std::int64_t D = branch_count(spec, k);

        // (D) uniform contraction via the closed-form sup
        if (!(branch_deriv_sup(spec, k) <= kEta))
            chk.contraction_ok = false;

        // (B) conformality: images of C(0, 2+eps) stay inside clD(0, 2 + eta_eps*eps)
        const double bound = 2.0 + ee * eps;
        for (std::int64_t j = 0; j < D; ++j) {
            for (std::int64_t i = 0; i < samples; ++i) {
                const Complex w = std::polar(2.0 + eps, 2.0 * pi * static_cast<double>(i) /
                                                            static_cast<double>(samples));
                if (!(std::abs(branch_apply(spec, k, j, w)) <= bound)) {
                    chk.conformality_ok = false;
                    break;
                }
            }
        }

        // (A) open set: branch images are exact rotations of the branch-0 image
        // by 2 pi / D; disjointness holds when the branch-0 boundary image spans
        // an angular arc narrower than 2 pi / D. Clearance from the adjacent pair.
        std::vector<Complex> img0(boundary.size());
        double amin = pi, amax = -pi;
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            img0[i] = branch_apply(spec, k, 0, boundary[i]);
            const double a = std::arg(img0[i]);
            amin = std::min(amin, a);
            amax = std::max(amax, a);
        }
        const double width = amax - amin;
        if (!(width < 2.0 * pi / static_cast<double>(D)))
            chk.open_set_ok = false;
        const Complex rot = std::polar(1.0, 2.0 * pi / static_cast<double>(D));
        double mind = std::numeric_limits<double>::infinity();
        for (const Complex& a : img0)
            for (const Complex& b : img0)
                mind = std::min(mind, std::abs(a - b * rot));
        if (!(mind > 0.0))
            chk.open_set_ok = false;
        chk.min_branch_clearance = std::min(chk.min_branch_clearance, mind);

        // balancedness: finite-difference derivative sup equal across branches.
        // The step is scaled so the difference quotient stays far above the
        // rounding floor of the branch images even when the contraction is
        // strong; the truncation bias is common to all branches.
        const double h_bal = std::min(0.25, 1e-6 / branch_deriv_sup(spec, k));
        double sup_min = std::numeric_limits<double>::infinity();
        double sup_max = 0.0;
        for (std::int64_t j = 0; j < D; ++j) {
            double sup_j = 0.0;
            for (std::int64_t i = 0; i < 64; ++i) {
                const Complex w = std::polar(2.0, 2.0 * pi * static_cast<double>(i) / 64.0);
                sup_j = std::max(sup_j, detail::fd_branch_deriv(spec, k, j, w, h_bal));
            }
            sup_min = std::min(sup_min, sup_j);
            sup_max = std::max(sup_max, sup_j);
        }
        if (!(sup_max - sup_min <= 1e-9 * sup_max))
            chk.balanced_ok = false;
    }

    // (C) bounded distortion, reported empirically: max/min of the composed
    // derivative along random words, sampled over boundary points of X.
    std::mt19937_64 rng(20240615u);
    for (std::int64_t k = 1; k <= k_max; ++k) {
        for (int rep = 0; rep < 4; ++rep) {
            Word w;
            w.letters.resize(static_cast<std::size_t>(k));
            for (std::int64_t i = 1; i <= k; ++i)
                w.letters[static_cast<std::size_t>(i - 1)] = static_cast<std::int64_t>(
                    rng() % static_cast<std::uint64_t>(branch_count(spec, i)));
            double dmin = std::numeric_limits<double>::infinity();
            double dmax = 0.0;
            for (std::int64_t i = 0; i < 32; ++i) {
                Complex z = std::polar(2.0, 2.0 * pi * static_cast<double>(i) / 32.0);
                double logd = 0.0;
                for (std::int64_t lev = k; lev >= 1; --lev) {
                    logd += std::log(detail::branch_deriv_at(spec, lev, z));
                    z = branch_apply(spec, lev, w.letters[static_cast<std::size_t>(lev - 1)], z);
                }
                dmin = std::min(dmin, logd);
                dmax = std::max(dmax, logd);
            }
            chk.distortion_ratio = std::max(chk.distortion_ratio, std::exp(dmax - dmin));
        }
    }
    return chk;
}

} // namespace najulia
