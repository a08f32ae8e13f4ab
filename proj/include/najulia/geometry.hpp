#pragma once

// Uniform-perfectness vs HNUP analysis: classification by declared asymptotics,
// separating-annulus moduli with component diameter bounds, and a numerical
// separation check that lifts the round annulus A(sqrt(-c_k), 1, sqrt|c_k|)
// back to stage 0 and verifies it isolates exactly one cylinder.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "najulia/errors.hpp"
#include "najulia/ncifs.hpp"
#include "najulia/parallel.hpp"
#include "najulia/seqcore.hpp"

namespace najulia {

struct AnnulusCertificate {
    std::int64_t k = 0;
    double modulus = 0.0;    // (log |c_k|) / 2
    double diam_bound = 4.0; // 4 * eta^(k-1), eta = 2^(-11/4)
    std::int64_t checkpoint = 0;
    double count = 1.0;      // 2^(M_k), exact as a double up to 2^1023
};

// diam bounds form the multiplicative ladder 4, 4*eta, 4*eta^2, ...; computed
// by the recurrence so consecutive certificates satisfy
// diam_bound(k+1) == diam_bound(k) * kEta bit-exactly.
inline double annulus_diam_bound(std::int64_t k) {
    double d = 4.0;
    for (std::int64_t i = 1; i < k; ++i)
        d *= kEta;
    return d;
}

inline AnnulusCertificate annulus_certificate(const ParamSpec& spec, std::int64_t k) {
    if (k < 1)
        throw PreconditionError("annulus level k must be >= 1");
    AnnulusCertificate cert;
    cert.k = k;
    cert.modulus = std::log(std::abs(spec.param(k).c)) / 2.0;
    cert.diam_bound = annulus_diam_bound(k);
    cert.checkpoint = spec.checkpoint(k);
    cert.count = std::exp2(static_cast<double>(cert.checkpoint));
    return cert;
}

enum class Verdict { UniformlyPerfect, HNUP, Undetermined };

struct Classification {
    Verdict verdict = Verdict::Undetermined;
    std::int64_t horizon = 0;
    double sup_abs_c = 0.0;     // over the examined horizon
    double modulus_first = 0.0; // separating modulus at k = 1
    double modulus_last = 0.0;  // at k = horizon
};

// Boundedness of {c_k} is an asymptotic property: formula specs carry it as a
// declaration, finite explicit lists cannot decide it.
inline Classification classify(const ParamSpec& spec, std::int64_t horizon) {
    if (horizon < 1)
        throw PreconditionError("classification horizon must be >= 1");
    horizon = std::min(horizon, spec.max_k());
    Classification cl;
    cl.horizon = horizon;
    for (std::int64_t k = 1; k <= horizon; ++k)
        cl.sup_abs_c = std::max(cl.sup_abs_c, std::abs(spec.param(k).c));
    cl.modulus_first = std::log(std::abs(spec.param(1).c)) / 2.0;
    cl.modulus_last = std::log(std::abs(spec.param(horizon).c)) / 2.0;
    if (spec.kind() == SpecKind::ExplicitList)
        cl.verdict = Verdict::Undetermined;
    else
        cl.verdict = spec.declared_bounded() ? Verdict::UniformlyPerfect : Verdict::HNUP;
    return cl;
}

struct ThinnessRow {
    std::int64_t k = 0;
    double modulus = 0.0;
    double diam_bound = 0.0;
    double count = 0.0;
};

struct ThinnessTable {
    std::vector<ThinnessRow> rows;
    bool moduli_strictly_increasing = false;
    bool diam_to_zero = false; // last row below first, i.e. the bound shrinks
};

inline ThinnessTable thinness_table(const ParamSpec& spec, std::int64_t k_max) {
    if (k_max < 1)
        throw PreconditionError("k_max must be >= 1");
    ThinnessTable table;
    table.rows.reserve(static_cast<std::size_t>(k_max));
    double diam = 4.0;
    bool increasing = true;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        ThinnessRow row;
        row.k = k;
        row.modulus = std::log(std::abs(spec.param(k).c)) / 2.0;
        row.diam_bound = diam;
        row.count = std::exp2(static_cast<double>(spec.checkpoint(k)));
        if (k > 1 && !(row.modulus > table.rows.back().modulus))
            increasing = false;
        table.rows.push_back(row);
        diam *= kEta;
    }
    table.moduli_strictly_increasing = increasing && k_max > 1;
    table.diam_to_zero = table.rows.back().diam_bound < table.rows.front().diam_bound;
    return table;
}

// ---------------------------------------------------------------------------
// Separation check.

struct SeparationResult {
    std::int64_t k = 0;
    bool pass = false;
    bool preimage_containment_ok = false; // (i)
    bool annuli_ok = false;               // (ii)
    double containment_clearance = 0.0;   // 1 - max dist to the nearer sqrt(-c) disc
    double min_clearance = 0.0;           // centers vs. lifted annulus boundaries
    double mesh_spacing = 0.0;            // polygon edge length where the clearance is attained
    std::int64_t words_checked = 0;
};

namespace detail {

// even-odd ray casting
inline bool point_in_polygon(Complex p, const std::vector<Complex>& poly) {
    const double x = p.real();
    const double y = p.imag();
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = poly[i];
        const Complex b = poly[(i + 1) % n];
        if ((a.imag() > y) != (b.imag() > y)) {
            const double xint =
                a.real() + (y - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (x < xint)
                inside = !inside;
        }
    }
    return inside;
}

struct PolygonBound {
    Complex centroid{0.0, 0.0};
    double radius = 0.0; // bounding radius about the centroid
};

inline PolygonBound polygon_bound(const std::vector<Complex>& poly) {
    PolygonBound st;
    for (const Complex& p : poly)
        st.centroid += p;
    st.centroid /= static_cast<double>(poly.size());
    for (const Complex& p : poly)
        st.radius = std::max(st.radius, std::abs(p - st.centroid));
    return st;
}

// Minimum distance to the polygon vertices plus the local edge length at the
// minimizing vertex. The local edge is the resolution that decides whether
// the measured distance can be trusted; a global maximum edge would be
// dominated by the root-map stretching near the origin, where no set lives.
struct PolyDist {
    double dist = std::numeric_limits<double>::infinity();
    double local_edge = 0.0;
};

inline PolyDist dist_to_polygon(Complex p, const std::vector<Complex>& poly) {
    const std::size_t n = poly.size();
    std::size_t best = 0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double di = std::abs(p - poly[i]);
        if (di < d) {
            d = di;
            best = i;
        }
    }
    const double e1 = std::abs(poly[(best + 1) % n] - poly[best]);
    const double e2 = std::abs(poly[(best + n - 1) % n] - poly[best]);
    return {d, std::max(e1, e2)};
}

struct ClearanceTracker {
    double clearance = std::numeric_limits<double>::infinity();
    double spacing_at_min = 0.0;

    void update(const PolyDist& pd) {
        if (pd.dist < clearance) {
            clearance = pd.dist;
            spacing_at_min = pd.local_edge;
        }
    }
    void merge(const ClearanceTracker& other) {
        if (other.clearance < clearance) {
            clearance = other.clearance;
            spacing_at_min = other.spacing_at_min;
        }
    }
};

} // namespace detail

// Verifies at level k:
//  (i)  both square roots of w - c_k, for w on C(0,2), lie within the unit
//       discs about +-sqrt(-c_k);
//  (ii) for every word, the annulus A(sqrt(-c_k), 1, sqrt|c_k|) lifted by the
//       matching slit-plane root branch, rotation, and word-prefix branches
//       isolates exactly the word's cylinder center: the center lies inside
//       the lifted inner circle and every other center lies outside the
//       lifted outer circle.
// All argument windows derive from the single canonical alpha = arg(-c_k):
// beta = alpha/2, sqrt(-c_k) := polar(sqrt|c_k|, beta), and the slit-root
// window is centered at beta - pi/2 (cut ray perpendicular to the disc axis,
// the only direction avoiding both discs).
inline SeparationResult separation_check(const ParamSpec& spec, std::int64_t k, std::int64_t mesh,
                                         int threads = 1) {
    constexpr double pi = std::numbers::pi;
    if (mesh < 64)
        throw PreconditionError("separation mesh must be >= 64");
    if (k < 1)
        throw PreconditionError("separation level must be >= 1");

    auto [c, m] = spec.param(k);
    if (!(std::abs(c) > 4.0))
        throw PreconditionError("separation_check requires |c_k| > 4");
    const std::int64_t Dfull = branch_count(spec, k);
    const double inv_half = std::exp2(-static_cast<double>(m)); // 1 / 2^(m_k)
    const double alpha = window_center_for(c);
    const double beta = alpha / 2.0;
    const double root_abs_c = std::sqrt(std::abs(c));
    const Complex s = std::polar(root_abs_c, beta); // sqrt(-c_k)
    const double slit_window = beta - pi / 2.0;

    SeparationResult res;
    res.k = k;

    // (i) preimage containment under the final quadratic step
    double worst = 0.0;
    for (std::int64_t i = 0; i < mesh; ++i) {
        const Complex w = std::polar(2.0, 2.0 * pi * static_cast<double>(i) / static_cast<double>(mesh));
        const Complex r = directed_root(w - c, alpha, 0.5);
        const double d = std::min({std::abs(r - s), std::abs(r + s), std::abs(-r - s), std::abs(-r + s)});
        worst = std::max(worst, d);
    }
    res.preimage_containment_ok = worst <= 1.0;
    res.containment_clearance = 1.0 - worst;

    const std::vector<Complex> centers = limit_points(spec, k);
    const std::int64_t nwords = static_cast<std::int64_t>(centers.size());
    res.words_checked = nwords;

    std::vector<Complex> inner0(static_cast<std::size_t>(mesh));
    std::vector<Complex> outer0(static_cast<std::size_t>(mesh));
    for (std::int64_t i = 0; i < mesh; ++i) {
        const Complex dir = std::polar(1.0, 2.0 * pi * static_cast<double>(i) / static_cast<double>(mesh));
        inner0[static_cast<std::size_t>(i)] = s + dir;
        outer0[static_cast<std::size_t>(i)] = s + root_abs_c * dir;
    }

    const std::int64_t nchunks = chunk_count(nwords, threads);
    std::vector<char> chunk_ok(static_cast<std::size_t>(nchunks), 1);
    std::vector<detail::ClearanceTracker> chunk_clear(static_cast<std::size_t>(nchunks));

    parallel_for_chunked(nwords, threads, [&](std::int64_t chunk, std::int64_t lo, std::int64_t hi) {
        bool ok = true;
        detail::ClearanceTracker tracker;
        std::vector<Complex> pin(static_cast<std::size_t>(mesh));
        std::vector<Complex> pout(static_cast<std::size_t>(mesh));
        for (std::int64_t idx = lo; idx < hi && ok; ++idx) {
            const Word w = word_from_index(spec, k, idx);
            const std::int64_t t = w.letters.back();
            const Complex rot = std::polar(1.0, 2.0 * pi * static_cast<double>(t) /
                                                    static_cast<double>(Dfull));
            for (std::int64_t i = 0; i < mesh; ++i) {
                pin[static_cast<std::size_t>(i)] =
                    directed_root(inner0[static_cast<std::size_t>(i)], slit_window, inv_half) * rot;
                pout[static_cast<std::size_t>(i)] =
                    directed_root(outer0[static_cast<std::size_t>(i)], slit_window, inv_half) * rot;
            }
            for (std::int64_t lev = k - 1; lev >= 1; --lev) {
                const std::int64_t letter = w.letters[static_cast<std::size_t>(lev - 1)];
                for (std::int64_t i = 0; i < mesh; ++i) {
                    pin[static_cast<std::size_t>(i)] =
                        branch_apply(spec, lev, letter, pin[static_cast<std::size_t>(i)]);
                    pout[static_cast<std::size_t>(i)] =
                        branch_apply(spec, lev, letter, pout[static_cast<std::size_t>(i)]);
                }
            }
            const Complex center = centers[static_cast<std::size_t>(idx)];
            if (!detail::point_in_polygon(center, pin)) {
                ok = false;
                break;
            }
            tracker.update(detail::dist_to_polygon(center, pin));
            const auto bound = detail::polygon_bound(pout);
            for (std::int64_t other = 0; other < nwords; ++other) {
                if (other == idx)
                    continue;
                const Complex oc = centers[static_cast<std::size_t>(other)];
                if (std::abs(oc - bound.centroid) > bound.radius)
                    continue; // certainly outside the lifted outer circle
                if (detail::point_in_polygon(oc, pout)) {
                    ok = false;
                    break;
                }
                tracker.update(detail::dist_to_polygon(oc, pout));
            }
        }
        chunk_ok[static_cast<std::size_t>(chunk)] = static_cast<char>(ok);
        chunk_clear[static_cast<std::size_t>(chunk)] = tracker;
    });

    bool annuli_ok = true;
    detail::ClearanceTracker tracker;
    for (std::size_t i = 0; i < chunk_ok.size(); ++i) {
        annuli_ok = annuli_ok && chunk_ok[i] != 0;
        tracker.merge(chunk_clear[i]);
    }
    res.annuli_ok = annuli_ok;
    res.min_clearance = std::min(tracker.clearance, res.containment_clearance);
    res.mesh_spacing = tracker.spacing_at_min;
    res.pass = res.preimage_containment_ok && res.annuli_ok && res.min_clearance > 0.0;
    if (res.pass && tracker.clearance < 10.0 * tracker.spacing_at_min)
        throw MeshTooCoarse("separation clearance " + std::to_string(tracker.clearance) +
                            " below 10x local mesh spacing " + std::to_string(tracker.spacing_at_min));
    return res;
}

} // namespace najulia
