#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "najulia/geometry.hpp"

using namespace najulia;
using Catch::Approx;

namespace {

ParamSpec const5_2() { return ParamSpec::constant({5.0, 0.0}, 2); }

} // namespace

TEST_CASE("classification by declared asymptotics") {
    CHECK(classify(const5_2(), 10).verdict == Verdict::UniformlyPerfect);
    CHECK(classify(ParamSpec::hd_max(), 10).verdict == Verdict::HNUP);
    const auto expl = ParamSpec::explicit_list(
        {{{5.0, 0.0}, 2}, {{6.0, 0.0}, 2}, {{7.0, 0.0}, 2}, {{8.0, 0.0}, 2}, {{9.0, 0.0}, 2}});
    const auto cl = classify(expl, 10);
    CHECK(cl.verdict == Verdict::Undetermined);
    CHECK(cl.horizon == 5);
    CHECK(cl.sup_abs_c == 9.0);
}

TEST_CASE("annulus certificates") {
    const double e2 = std::exp(2.0);
    const auto spec_e2 = ParamSpec::explicit_list({{{e2, 0.0}, 3}});
    CHECK(annulus_certificate(spec_e2, 1).modulus == Approx(1.0).epsilon(1e-14));

    const auto hd = ParamSpec::hd_max();
    CHECK(annulus_certificate(hd, 96).modulus == Approx(2.3025850929940457).epsilon(1e-14));
    CHECK(annulus_certificate(hd, 3).diam_bound == Approx(0.08838834764831844).epsilon(1e-14)); // 4 eta^2
    CHECK(annulus_certificate(hd, 1).count == 8.0);   // 2^(M_1) = 2^3
    CHECK(annulus_certificate(hd, 2).count == 128.0); // 2^7

    // modulus always exceeds (log 4)/2 for valid specs
    for (std::int64_t k = 1; k <= 30; ++k)
        CHECK(annulus_certificate(hd, k).modulus > std::log(4.0) / 2.0);
}

TEST_CASE("thinness table: hdmax moduli increase, diameters collapse") {
    const auto table = thinness_table(ParamSpec::hd_max(), 20);
    REQUIRE(table.rows.size() == 20);
    CHECK(table.moduli_strictly_increasing);
    CHECK(table.diam_to_zero);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        CHECK(r.modulus == std::log(static_cast<double>(r.k) + 4.0) / 2.0);
        if (i > 0) {
            CHECK(r.modulus > table.rows[i - 1].modulus);
            // multiplicative ladder: bit-exact recurrence
            CHECK(r.diam_bound == table.rows[i - 1].diam_bound * kEta);
        }
    }
    CHECK(table.rows.front().diam_bound == 4.0);
    CHECK(table.rows.back().diam_bound < 1e-15);
}

TEST_CASE("thinness table: constant spec has constant moduli") {
    const auto table = thinness_table(const5_2(), 8);
    for (const auto& r : table.rows)
        CHECK(r.modulus == Approx(0.80471895621705019).epsilon(1e-14)); // log(5)/2
    CHECK_FALSE(table.moduli_strictly_increasing);
    CHECK(table.diam_to_zero);
}

TEST_CASE("thinness table: single row") {
    const auto table = thinness_table(const5_2(), 1);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].diam_bound == 4.0);
}

TEST_CASE("annulus diam bound agrees with the certificate ladder") {
    const auto hd = ParamSpec::hd_max();
    const auto table = thinness_table(hd, 12);
    for (const auto& r : table.rows)
        CHECK(annulus_certificate(hd, r.k).diam_bound == r.diam_bound);
}

TEST_CASE("separation_check passes for the reference specs") {
    const auto res_c = separation_check(const5_2(), 1, 1024);
    CHECK(res_c.pass);
    CHECK(res_c.preimage_containment_ok);
    CHECK(res_c.annuli_ok);
    CHECK(res_c.min_clearance > 0.0);
    CHECK(res_c.words_checked == 8);

    const auto res_h = separation_check(ParamSpec::hd_max(), 2, 1024);
    CHECK(res_h.pass);
    CHECK(res_h.min_clearance > 0.0);
    CHECK(res_h.words_checked == 128);
}

TEST_CASE("separation_check handles complex parameters") {
    // off-axis c exercises the cut-window geometry away from the real line
    const auto spec = ParamSpec::explicit_list({{{4.0, 3.0}, 2}, {{-3.0, -4.5}, 2}});
    for (std::int64_t k : {1, 2}) {
        const auto res = separation_check(spec, k, 512);
        CHECK(res.pass);
        CHECK(res.min_clearance > 0.0);
    }
}

TEST_CASE("separation_check is deterministic across worker counts") {
    const auto a = separation_check(const5_2(), 2, 256, 1);
    const auto b = separation_check(const5_2(), 2, 256, 5);
    CHECK(a.pass == b.pass);
    CHECK(a.min_clearance == b.min_clearance);
    CHECK(a.mesh_spacing == b.mesh_spacing);
}

TEST_CASE("separation_check preconditions") {
    CHECK_THROWS_AS(separation_check(const5_2(), 1, 32), PreconditionError);
    CHECK_THROWS_AS(separation_check(const5_2(), 0, 1024), PreconditionError);
}

TEST_CASE("separation_check rejects meshes too coarse for the clearance") {
    // at mesh 64 the local polygon edges are within a factor 10 of the
    // clearance, so the result is untrusted
    CHECK_THROWS_AS(separation_check(const5_2(), 1, 64), MeshTooCoarse);
}
