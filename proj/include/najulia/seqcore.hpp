#pragma once

// Parameter sequences (c_k, m_k), checkpoints M_k, polynomial steps,
// composition windows, orbit evaluation and survival-set membership.
//
// The sequence defines quadratic steps P_m(z) = z^2 except at the checkpoint
// stages M_k = sum_{j<=k}(m_j + 1), where P_{M_k}(z) = z^2 + c_k. The window
// from stage M_{k-1} to M_k is therefore z -> z^(2^(m_k+1)) + c_k, evaluated
// by repeated squaring so that window_apply and step-by-step orbits perform
// identical float operations.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "najulia/errors.hpp"

namespace najulia {

using Complex = std::complex<double>;

enum class SpecKind { ExplicitList, HdMaxFormula, ConstantFormula };

struct ParamEntry {
    Complex c;
    std::int64_t m = 1;
};

// Orbit magnitudes are capped here; past the cap the orbit has certainly
// escaped and squaring further would hit inf/NaN complex arithmetic.
inline constexpr double kMagnitudeCap = 1e300;

class ParamSpec {
public:
    static ParamSpec hd_max(std::int64_t horizon_default = 64) {
        ParamSpec s;
        s.kind_ = SpecKind::HdMaxFormula;
        s.declared_bounded_ = false;
        s.horizon_default_ = horizon_default;
        return s;
    }

    static ParamSpec constant(Complex c, std::int64_t m, std::int64_t horizon_default = 64) {
        check_entry(c, m, 1);
        ParamSpec s;
        s.kind_ = SpecKind::ConstantFormula;
        s.c_ = c;
        s.m_ = m;
        s.declared_bounded_ = true;
        s.horizon_default_ = horizon_default;
        return s;
    }

    static ParamSpec explicit_list(std::vector<ParamEntry> entries, bool declared_bounded = false) {
        if (entries.empty())
            throw ZeroLengthSpec("explicit parameter list is empty");
        for (std::size_t i = 0; i < entries.size(); ++i)
            check_entry(entries[i].c, entries[i].m, static_cast<std::int64_t>(i) + 1);
        ParamSpec s;
        s.kind_ = SpecKind::ExplicitList;
        s.entries_ = std::move(entries);
        s.declared_bounded_ = declared_bounded;
        s.horizon_default_ = static_cast<std::int64_t>(s.entries_.size());
        s.prefix_.resize(s.entries_.size() + 1, 0);
        for (std::size_t i = 0; i < s.entries_.size(); ++i)
            s.prefix_[i + 1] = s.prefix_[i] + s.entries_[i].m + 1;
        return s;
    }

    SpecKind kind() const { return kind_; }
    bool declared_bounded() const { return declared_bounded_; }
    std::int64_t horizon_default() const { return horizon_default_; }
    bool finite_horizon() const { return kind_ == SpecKind::ExplicitList; }
    const std::vector<ParamEntry>& entries() const { return entries_; }
    Complex constant_c() const { return c_; }
    std::int64_t constant_m() const { return m_; }

    std::int64_t max_k() const {
        return finite_horizon() ? static_cast<std::int64_t>(entries_.size())
                                : std::numeric_limits<std::int64_t>::max();
    }

    ParamEntry param(std::int64_t k) const {
        if (k < 1)
            throw PreconditionError("parameter index k must be >= 1, got " + std::to_string(k));
        switch (kind_) {
        case SpecKind::ExplicitList:
            if (k > static_cast<std::int64_t>(entries_.size()))
                throw HorizonExceeded("k = " + std::to_string(k) + " beyond explicit list of length " +
                                      std::to_string(entries_.size()));
            return entries_[static_cast<std::size_t>(k - 1)];
        case SpecKind::HdMaxFormula:
            return {Complex(static_cast<double>(k) + 4.0, 0.0), k + 1};
        case SpecKind::ConstantFormula:
            return {c_, m_};
        }
        throw Error("unreachable");
    }

    // M_k = sum_{j=1..k}(m_j + 1), M_0 = 0.
    std::int64_t checkpoint(std::int64_t k) const {
        if (k < 0)
            throw PreconditionError("checkpoint index must be >= 0, got " + std::to_string(k));
        if (k == 0)
            return 0;
        switch (kind_) {
        case SpecKind::ExplicitList:
            if (k > static_cast<std::int64_t>(entries_.size()))
                throw HorizonExceeded("checkpoint k = " + std::to_string(k) + " beyond explicit list");
            return prefix_[static_cast<std::size_t>(k)];
        case SpecKind::HdMaxFormula:
            if (k > 2000000000)
                throw HorizonExceeded("checkpoint index too large");
            return k * (k + 5) / 2;
        case SpecKind::ConstantFormula:
            return k * (m_ + 1);
        }
        throw Error("unreachable");
    }

    // Largest k >= 0 with M_k <= stage.
    std::int64_t last_checkpoint_index(std::int64_t stage) const {
        if (stage < 0)
            throw PreconditionError("stage must be >= 0");
        switch (kind_) {
        case SpecKind::ExplicitList: {
            std::int64_t k = 0;
            while (k + 1 <= static_cast<std::int64_t>(entries_.size()) &&
                   prefix_[static_cast<std::size_t>(k + 1)] <= stage)
                ++k;
            return k;
        }
        case SpecKind::HdMaxFormula: {
            // invert k(k+5)/2 <= stage
            auto k = static_cast<std::int64_t>((std::sqrt(25.0 + 8.0 * static_cast<double>(stage)) - 5.0) / 2.0);
            while (k > 0 && checkpoint(k) > stage)
                --k;
            while (checkpoint(k + 1) <= stage)
                ++k;
            return k;
        }
        case SpecKind::ConstantFormula:
            return stage / (m_ + 1);
        }
        throw Error("unreachable");
    }

    bool is_checkpoint(std::int64_t stage, std::int64_t& k_out) const {
        if (stage <= 0) {
            k_out = 0;
            return stage == 0;
        }
        std::int64_t k = last_checkpoint_index(stage);
        k_out = k;
        return k >= 1 && checkpoint(k) == stage;
    }

private:
    static void check_entry(Complex c, std::int64_t m, std::int64_t k) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw NonfiniteParameter("c_" + std::to_string(k) + " is not a finite complex number");
        if (m < 1)
            throw InvalidParameter("m_" + std::to_string(k) + " must be a positive integer, got " +
                                   std::to_string(m));
    }

    SpecKind kind_ = SpecKind::ConstantFormula;
    std::vector<ParamEntry> entries_;
    std::vector<std::int64_t> prefix_;
    Complex c_{5.0, 0.0};
    std::int64_t m_ = 2;
    bool declared_bounded_ = true;
    std::int64_t horizon_default_ = 64;
};

// The polynomial applied at a single stage: z^2, plus c at checkpoints.
struct Step {
    bool add_c = false;
    Complex c{0.0, 0.0};
};

inline Step step_at(const ParamSpec& spec, std::int64_t stage) {
    if (stage < 1)
        throw PreconditionError("stages are 1-based");
    std::int64_t k = 0;
    if (spec.is_checkpoint(stage, k))
        return {true, spec.param(k).c};
    // stage must still be within the realizable horizon for explicit lists
    if (spec.finite_horizon() && stage > spec.checkpoint(spec.max_k()))
        throw HorizonExceeded("stage beyond explicit list horizon");
    return {false, Complex(0.0, 0.0)};
}

inline Complex apply_step(const Step& s, Complex z) {
    z = z * z;
    return s.add_c ? z + s.c : z;
}

// ---------------------------------------------------------------------------
// Validation of the construction inequalities.

struct ValidationRow {
    std::int64_t k = 0;
    Complex c{0.0, 0.0};
    std::int64_t m = 0;
    bool modulus_ok = false; // |c_k| > 4
    bool strong_ok = false;  // 2^(2^m_k) >= 2 sqrt|c_k|
    bool weak_ok = false;    // 2^(2^m_k) >  sqrt|c_k| + 1
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool all_modulus = true;
    bool all_strong = true;
    bool all_weak = true;

    bool pass(bool allow_weak = false) const {
        return all_modulus && (allow_weak ? all_weak : all_strong);
    }
};

// 2^(2^m) is exact in binary64 for m <= 9 and +inf from m = 10 on, which
// still compares correctly against 2 sqrt|c| (< 2^78 for any finite c).
inline bool strong_inequality_ok(Complex c, std::int64_t m) {
    if (m >= 10)
        return true;
    double lhs = std::ldexp(1.0, static_cast<int>(std::int64_t(1) << m));
    return lhs >= 2.0 * std::sqrt(std::abs(c));
}

inline bool weak_inequality_ok(Complex c, std::int64_t m) {
    if (m >= 10)
        return true;
    double lhs = std::ldexp(1.0, static_cast<int>(std::int64_t(1) << m));
    return lhs > std::sqrt(std::abs(c)) + 1.0;
}

inline ValidationReport validate(const ParamSpec& spec, std::int64_t K) {
    if (K < 1)
        throw PreconditionError("validation horizon K must be >= 1");
    ValidationReport rep;
    rep.rows.reserve(static_cast<std::size_t>(K));
    for (std::int64_t k = 1; k <= K; ++k) {
        auto [c, m] = spec.param(k);
        ValidationRow row;
        row.k = k;
        row.c = c;
        row.m = m;
        row.modulus_ok = std::abs(c) > 4.0;
        row.strong_ok = strong_inequality_ok(c, m);
        row.weak_ok = weak_inequality_ok(c, m);
        rep.all_modulus &= row.modulus_ok;
        rep.all_strong &= row.strong_ok;
        rep.all_weak &= row.weak_ok;
        rep.rows.push_back(row);
    }
    return rep;
}

inline void require_valid(const ParamSpec& spec, std::int64_t K, bool allow_weak = false) {
    auto rep = validate(spec, K);
    if (!rep.pass(allow_weak)) {
        for (const auto& r : rep.rows) {
            if (!r.modulus_ok)
                throw PreconditionError("|c_k| > 4 violated at k = " + std::to_string(r.k));
            if (!allow_weak && !r.strong_ok)
                throw PreconditionError("strong inequality 2^(2^m_k) >= 2 sqrt|c_k| violated at k = " +
                                        std::to_string(r.k));
            if (allow_weak && !r.weak_ok)
                throw PreconditionError("weak inequality 2^(2^m_k) > sqrt|c_k| + 1 violated at k = " +
                                        std::to_string(r.k));
        }
    }
}

// ---------------------------------------------------------------------------
// Window application and orbits.

// z -> z^(2^(m_k+1)) + c_k via m_k+1 squarings. Escaping inputs may saturate;
// the result is then a flagged infinity (non-finite), not an error.
inline Complex window_apply(const ParamSpec& spec, std::int64_t k, Complex z) {
    auto [c, m] = spec.param(k);
    for (std::int64_t i = 0; i <= m; ++i) {
        if (std::norm(z) > kMagnitudeCap)
            return Complex(std::numeric_limits<double>::infinity(), 0.0);
        z = z * z;
    }
    return z + c;
}

struct OrbitSample {
    std::int64_t stage = 0;
    std::int64_t k = 0;
    Complex z{0.0, 0.0};
};

struct OrbitRecord {
    std::int64_t start_stage = 0;
    std::vector<OrbitSample> samples;             // one per checkpoint reached
    std::optional<std::int64_t> escape_checkpoint; // first k with |Q_{M_k}| > 2
    double log_deriv = 0.0;                       // sum of log|2 w| over applied steps
    std::vector<double> log_deriv_prefix;         // [i] = sum over the first i steps
    bool overflowed = false;
};

// Applies Step(m) for m = start_stage+1 .. M_K, recording the value at every
// checkpoint. Saturates (and stops) once the magnitude cap is hit; escape is
// already decided at that point.
inline OrbitRecord orbit(const ParamSpec& spec, Complex z0, std::int64_t start_stage,
                         std::int64_t max_checkpoint) {
    if (max_checkpoint < 0)
        throw PreconditionError("max_checkpoint must be >= 0");
    const std::int64_t end_stage = spec.checkpoint(max_checkpoint);
    if (start_stage < 0 || start_stage > end_stage)
        throw PreconditionError("start_stage must lie in [0, M_K]");

    OrbitRecord rec;
    rec.start_stage = start_stage;
    rec.log_deriv_prefix.push_back(0.0);

    Complex z = z0;
    std::int64_t stage = start_stage;
    std::int64_t k_first = spec.last_checkpoint_index(start_stage) + 1;
    for (std::int64_t k = k_first; k <= max_checkpoint; ++k) {
        const Complex c = spec.param(k).c;
        const std::int64_t window_end = spec.checkpoint(k);
        bool saturated = false;
        while (stage < window_end) {
            if (std::norm(z) > kMagnitudeCap) {
                saturated = true;
                break;
            }
            rec.log_deriv += std::log(2.0 * std::abs(z));
            rec.log_deriv_prefix.push_back(rec.log_deriv);
            z = z * z;
            ++stage;
            if (stage == window_end)
                z += c;
        }
        if (saturated) {
            rec.overflowed = true;
            rec.samples.push_back({window_end, k, Complex(kMagnitudeCap, 0.0)});
            if (!rec.escape_checkpoint)
                rec.escape_checkpoint = k;
            break;
        }
        rec.samples.push_back({stage, k, z});
        if (!rec.escape_checkpoint && std::abs(z) > 2.0)
            rec.escape_checkpoint = k;
    }
    return rec;
}

// True iff |Q_{M_j}(z)| <= 2 for every j = 1..k (early exit on first failure).
inline bool survival_test(const ParamSpec& spec, Complex z, std::int64_t k) {
    if (k < 1)
        throw PreconditionError("survival depth k must be >= 1");
    for (std::int64_t j = 1; j <= k; ++j) {
        z = window_apply(spec, j, z);
        if (!(std::abs(z) <= 2.0))
            return false;
    }
    return true;
}

} // namespace najulia
