#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>

#include "najulia/ncifs.hpp"

using namespace najulia;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

ParamSpec const5_2() { return ParamSpec::constant({5.0, 0.0}, 2); }

} // namespace

TEST_CASE("branch_apply: explicit fourth roots at (c=5, m=1)") {
    const auto spec = ParamSpec::explicit_list({{{5.0, 0.0}, 1}});
    // (1+i)^4 = -4 and -4+5 = 1, so 1+i inverts w=1 under z^4+5;
    // j=1 is the j=0 root rotated by e^(i pi/2)
    const Complex b0 = branch_apply(spec, 1, 0, {1.0, 0.0});
    const Complex b1 = branch_apply(spec, 1, 1, {1.0, 0.0});
    CHECK(std::abs(b0 - Complex(1.0, 1.0)) < 1e-12);
    CHECK(std::abs(b1 - Complex(-1.0, 1.0)) < 1e-12);
    CHECK(std::abs(window_apply(spec, 1, b0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(window_apply(spec, 1, b1) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("branch_apply errors") {
    const auto spec = const5_2();
    CHECK_THROWS_AS(branch_apply(spec, 1, 0, {4.0, 0.0}), DomainViolation);
    CHECK_THROWS_AS(branch_apply(spec, 1, 8, {1.0, 0.0}), BranchIndexOutOfRange);
    CHECK_THROWS_AS(branch_apply(spec, 1, -1, {1.0, 0.0}), BranchIndexOutOfRange);
    const auto bad = ParamSpec::explicit_list({{{3.0, 0.0}, 2}});
    CHECK_THROWS_AS(branch_apply(bad, 1, 0, {1.0, 0.0}), PreconditionError);
}

TEST_CASE("round trip window_apply(branch_apply) = id on D(0, 3.9)") {
    const auto hd = ParamSpec::hd_max();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::int64_t k = 1; k <= 6; ++k) {
        const std::int64_t D = branch_count(hd, k);
        for (std::int64_t j = 0; j < D; ++j) {
            for (int rep = 0; rep < 20; ++rep) {
                const Complex w = std::polar(3.9 * std::sqrt(unif(rng)), 2.0 * pi * unif(rng));
                const Complex z = branch_apply(hd, k, j, w);
                CHECK(std::abs(window_apply(hd, k, z) - w) <= 1e-10 * (1.0 + std::abs(w)));
            }
        }
    }
}

TEST_CASE("round trip holds for c near the positive real axis") {
    // the image disc sits near arg 0 there; the cut opposite -c keeps the
    // domain clear of the discontinuity on either side of the axis
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const Complex c : {Complex(5.0, 1e-2), Complex(5.0, -1e-2), Complex(5.0, 0.0)}) {
        const auto spec = ParamSpec::explicit_list({{c, 2}});
        for (std::int64_t j = 0; j < 8; ++j) {
            for (int rep = 0; rep < 50; ++rep) {
                const Complex w = std::polar(3.9 * std::sqrt(unif(rng)), 2.0 * pi * unif(rng));
                const Complex z = branch_apply(spec, 1, j, w);
                CHECK(std::abs(window_apply(spec, 1, z) - w) <= 1e-10 * (1.0 + std::abs(w)));
            }
        }
    }
}

TEST_CASE("branches are exact rotations of each other") {
    const auto spec = const5_2();
    const std::int64_t D = branch_count(spec, 1);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const Complex w = std::polar(3.5 * unif(rng), 2.0 * pi * unif(rng));
        const Complex base = branch_apply(spec, 1, 0, w);
        for (std::int64_t j = 1; j < D; ++j) {
            const Complex rot = branch_apply(spec, 1, j, w) / base;
            const Complex expect = std::polar(1.0, 2.0 * pi * static_cast<double>(j) /
                                                       static_cast<double>(D));
            CHECK(std::abs(rot - expect) < 1e-12);
        }
    }
}

TEST_CASE("branch_deriv_sup closed form") {
    const auto s61 = ParamSpec::explicit_list({{{6.0, 0.0}, 1}});
    const auto s62 = ParamSpec::explicit_list({{{6.0, 0.0}, 2}});
    CHECK(branch_deriv_sup(s61, 1) == Approx(0.08838834764831844).epsilon(1e-14)); // 2^-3.5
    CHECK(branch_deriv_sup(s62, 1) == Approx(0.037162722343835033).epsilon(1e-14)); // 2^-4.75
    CHECK(branch_deriv_sup(const5_2(), 1) == Approx(0.047800112101661545).epsilon(1e-14));
    // every admissible level contracts by less than eta
    const auto hd = ParamSpec::hd_max();
    for (std::int64_t k = 1; k <= 40; ++k)
        CHECK(branch_deriv_sup(hd, k) < kEta);
    CHECK(kEta == Approx(0.14865088937534013).epsilon(1e-14));
}

TEST_CASE("finite-difference derivative matches the closed-form modulus") {
    const auto spec = const5_2();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const Complex w = std::polar(0.5 + 1.4 * unif(rng), 2.0 * pi * unif(rng));
        const double h = 1e-6;
        const double fd = std::abs(branch_apply(spec, 1, 2, w + Complex(h, 0.0)) -
                                   branch_apply(spec, 1, 2, w - Complex(h, 0.0))) /
                          (2.0 * h);
        const double analytic = 0.125 * std::pow(std::abs(w - Complex(5.0, 0.0)), 1.0 / 8.0 - 1.0);
        CHECK(fd == Approx(analytic).epsilon(1e-5));
    }
}

TEST_CASE("cylinder: empty word is the identity") {
    const auto spec = const5_2();
    const auto cyl = cylinder(spec, Word{}, {1.25, 0.5});
    CHECK(cyl.center == Complex(1.25, 0.5));
    CHECK(cyl.radius_bound == 4.0);
}

TEST_CASE("cylinder radius bounds") {
    const auto spec = const5_2();
    // 4 s^3 with s = (1/8) 3^(-7/8)
    CHECK(cylinder_radius_bound(spec, 3) == Approx(4.3686448161953270e-4).epsilon(1e-12));
    const auto hd = ParamSpec::hd_max();
    for (std::int64_t k = 0; k <= 8; ++k) {
        CHECK(cylinder_radius_bound(hd, k) <= 4.0 * std::pow(kEta, static_cast<double>(k)) * (1 + 1e-12));
        CHECK(cylinder_radius_bound(hd, k) > 0.0);
    }
}

TEST_CASE("monotone refinement: longer words stay inside the parent bound") {
    const auto spec = const5_2();
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        Word w;
        const std::int64_t klen = 1 + static_cast<std::int64_t>(rng() % 3);
        for (std::int64_t i = 0; i < klen; ++i)
            w.letters.push_back(static_cast<std::int64_t>(rng() % 8));
        Word ext = w;
        ext.letters.push_back(static_cast<std::int64_t>(rng() % 8));
        const auto parent = cylinder(spec, w);
        const auto child = cylinder(spec, ext);
        CHECK(std::abs(child.center - parent.center) <= parent.radius_bound);
    }
}

TEST_CASE("limit_points: level 0 and level 1") {
    const auto spec = const5_2();
    const auto p0 = limit_points(spec, 0, {1.5, 0.0});
    REQUIRE(p0.size() == 1);
    CHECK(p0[0] == Complex(1.5, 0.0));

    const auto p1 = limit_points(spec, 1);
    REQUIRE(p1.size() == 8);
    std::set<std::pair<double, double>> distinct;
    for (const auto& z : p1) {
        distinct.insert({z.real(), z.imag()});
        CHECK(std::abs(z) > 1.0);
        CHECK(std::abs(z) <= 2.0);
        // anchor 2: all first-level centers have modulus |2-5|^(1/8)
        CHECK(std::abs(z) == Approx(1.1472026904398771).epsilon(1e-14));
    }
    CHECK(distinct.size() == 8);
}

TEST_CASE("limit_points order matches word_from_index composition") {
    const auto hd = ParamSpec::hd_max();
    const auto pts = limit_points(hd, 2);
    REQUIRE(pts.size() == 128); // 2^(M_2) = 2^7
    for (std::int64_t idx = 0; idx < 128; idx += 11) {
        const Word w = word_from_index(hd, 2, idx);
        CHECK(index_from_word(hd, w) == idx);
        const auto cyl = cylinder(hd, w);
        CHECK(std::abs(cyl.center - pts[static_cast<std::size_t>(idx)]) < 1e-13);
    }
}

TEST_CASE("limit_points at level 2 survive to depth 2 within tolerance") {
    const auto spec = const5_2();
    // anchor on the escape boundary: checkpoint values sit on |z| = 2 exactly,
    // so allow rounding slack
    for (const auto& z : limit_points(spec, 2)) {
        Complex w = z;
        for (std::int64_t j = 1; j <= 2; ++j) {
            w = window_apply(spec, j, w);
            CHECK(std::abs(w) <= 2.0 + 1e-9);
        }
    }
    // an interior anchor survives strictly
    for (const auto& z : limit_points(spec, 2, {1.5, 0.0}))
        CHECK(survival_test(spec, z, 2));
}

TEST_CASE("limit_points stay in the annulus up to the cylinder radius") {
    for (const auto& spec : {const5_2(), ParamSpec::hd_max()}) {
        for (std::int64_t k : {2, 3}) {
            const double rb = cylinder_radius_bound(spec, k);
            for (const auto& z : limit_points(spec, k)) {
                CHECK(std::abs(z) > 1.0 - rb);
                CHECK(std::abs(z) <= 2.0 + rb);
            }
        }
    }
}

TEST_CASE("limit_points budget") {
    const auto spec = const5_2();
    CHECK_THROWS_AS(limit_points(spec, 6, {2.0, 0.0}, 1000), BudgetExceeded);
    const auto hd = ParamSpec::hd_max();
    CHECK_THROWS_AS(limit_points(hd, 30), BudgetExceeded); // M_30 >= 62
}

TEST_CASE("verify_system: reference specs satisfy all conditions") {
    for (const auto& spec : {const5_2(), ParamSpec::hd_max()}) {
        const auto chk = verify_system(spec, 4, 0.5, 512);
        CHECK(chk.open_set_ok);
        CHECK(chk.conformality_ok);
        CHECK(chk.contraction_ok);
        CHECK(chk.balanced_ok);
        CHECK(chk.pass());
        CHECK(chk.min_branch_clearance > 0.0);
        CHECK(chk.distortion_ratio >= 1.0);
        CHECK(chk.eta_eps == Approx(0.18444698661672027).epsilon(1e-14));
    }
}

TEST_CASE("verify_system precondition on epsilon") {
    CHECK_THROWS_AS(verify_system(const5_2(), 3, 1.9, 512), PreconditionError);
    CHECK_THROWS_AS(verify_system(const5_2(), 3, 0.0, 512), PreconditionError);
}
