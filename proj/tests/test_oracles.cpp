#include "doctest.h"

#include <cmath>

#include "pbbf/oracles.hpp"
#include "test_support.hpp"

using namespace pbbf;

namespace {

bool close(std::span<const cplx> a, const CVec& b, double tol = 1e-12)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol) {
            return false;
        }
    }
    return a.size() == b.size();
}

CVec zeros(std::size_t n) { return CVec(n, cplx{0, 0}); }

}  // namespace

TEST_CASE("egc examples")
{
    const auto a = egc_weights(CompoundParams{{cplx{0, 2}}, zeros(1)});
    CHECK(close(a.weights.weights(), CVec{cplx{0, 1}}));
    CHECK(a.weights.constraint() == ConstraintKind::per_relay);
    const auto b = egc_weights(CompoundParams{{1.0, -1.0}, zeros(2)});
    CHECK(close(b.weights.weights(), CVec{1.0, -1.0}));
    CHECK(b.zero_coefficients.empty());
    const auto c = egc_weights(CompoundParams{{cplx{0, 0}, cplx{3, 0}}, zeros(2)});
    CHECK(close(c.weights.weights(), CVec{1.0, 1.0}));
    REQUIRE(c.zero_coefficients.size() == 1);
    CHECK(c.zero_coefficients[0] == 0);
}

TEST_CASE("egc combines coherently and beats random unit-modulus vectors")
{
    RandomStream rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const CompoundParams cp{test::random_cvec(rng, 4), test::random_cvec(rng, 4)};
        const auto w = egc_weights(cp).weights;
        const cplx eff = effective_channel(w.weights(), cp);
        double sum_abs = 0.0;
        for (const auto& h : cp.hbar) {
            sum_abs += std::abs(h);
        }
        CHECK(std::abs(eff.imag()) < 1e-12);
        CHECK(eff.real() == doctest::Approx(sum_abs).epsilon(1e-12));
        const double best = objective_power(w.weights(), cp);
        for (int k = 0; k < 1000; ++k) {
            const CVec v = test::random_unit_modulus(rng, 4);
            CHECK(objective_power(v, cp) <= best * (1 + 1e-9));
        }
    }
}

TEST_CASE("psp examples")
{
    const double s = 1.0 / std::sqrt(2.0);
    const CompoundParams a{{cplx{1, 0}, cplx{0, 1}}, zeros(2)};
    CHECK(close(psp_weights(a).weights(), CVec{s, cplx{0, s}}));
    CHECK(objective_power(psp_weights(a).weights(), a) == doctest::Approx(2.0));
    const CompoundParams b{{3.0, 0.0, 4.0}, zeros(3)};
    CHECK(close(psp_weights(b).weights(), CVec{0.6, 0.0, 0.8}));
    CHECK_THROWS_AS(psp_weights(CompoundParams{zeros(2), zeros(2)}), DegenerateChannelError);
    CHECK_THROWS_AS(ssp_weights(CompoundParams{zeros(2), zeros(2)}), DegenerateChannelError);
}

TEST_CASE("ssp reduces to psp without forward noise")
{
    RandomStream rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const CompoundParams cp{test::random_cvec(rng, 3), zeros(3)};
        const auto a = ssp_weights(cp);
        const auto b = psp_weights(cp);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(a[i] - b[i]) < 1e-12);
        }
    }
}

TEST_CASE("ssp two-relay example against grid and random search")
{
    const CompoundParams cp{{1.0, 1.0}, {1.0, 0.0}};
    const auto w = ssp_weights(cp);
    CHECK(close(w.weights(), CVec{1 / std::sqrt(5.0), 2 / std::sqrt(5.0)}));
    const double best = objective_snr(w.weights(), cp, 1.0);
    CHECK(best == doctest::Approx(test::reference_snr(w.vector(), cp.hbar, cp.gbar, 1.0)));

    // Grid over unit-norm vectors up to a global phase:
    // w = [cos t, sin t e^{j phi}].
    double grid_best = 0.0;
    double arg_t = 0.0;
    constexpr int n = 600;
    for (int a = 0; a <= n; ++a) {
        const double t = 0.5 * kPi * a / n;
        for (int b = 0; b < n; ++b) {
            const double phi = 2.0 * kPi * b / n;
            const CVec v{std::cos(t), std::sin(t) * std::polar(1.0, phi)};
            const double val = test::reference_snr(v, cp.hbar, cp.gbar, 1.0);
            if (val > grid_best) {
                grid_best = val;
                arg_t = t;
            }
        }
    }
    CHECK(grid_best <= best * (1 + 1e-9));
    CHECK(grid_best >= best * (1 - 1e-4));
    CHECK(std::abs(std::tan(arg_t) - 2.0) < 0.02);

    RandomStream rng(43);
    for (int k = 0; k < 100000; ++k) {
        const CVec v = test::random_unit_norm(rng, 2);
        REQUIRE(test::reference_snr(v, cp.hbar, cp.gbar, 1.0) <= best * (1 + 1e-9));
    }
}

TEST_CASE("ssp dominates the other designs on SNR")
{
    RandomStream rng(44);
    for (int trial = 0; trial < 10000; ++trial) {
        const CompoundParams cp{test::random_cvec(rng, 3), test::random_cvec(rng, 3, 4.0)};
        const double best = objective_snr(ssp_weights(cp).weights(), cp, 1.0);
        auto egc = egc_weights(cp).weights.vector();
        for (auto& x : egc) {
            x /= std::sqrt(3.0);
        }
        REQUIRE(objective_snr(egc, cp, 1.0) <= best * (1 + 1e-12));
        REQUIRE(objective_snr(nobf_weights(3).weights(), cp, 1.0) <= best * (1 + 1e-12));
        REQUIRE(objective_snr(psp_weights(cp).weights(), cp, 1.0) <= best * (1 + 1e-12));
    }
}

TEST_CASE("oracles are optimal against random search")
{
    RandomStream rng(45);
    for (int trial = 0; trial < 30; ++trial) {
        const CompoundParams cp{test::random_cvec(rng, 3), test::random_cvec(rng, 3, 2.0)};
        const double snr_best = objective_snr(ssp_weights(cp).weights(), cp, 1.0);
        const double pw_best = objective_power(psp_weights(cp).weights(), cp);
        for (int k = 0; k < 10000; ++k) {
            const CVec v = test::random_unit_norm(rng, 3);
            REQUIRE(test::reference_snr(v, cp.hbar, cp.gbar, 1.0) <= snr_best * (1 + 1e-9));
            REQUIRE(objective_power(v, cp) <= pw_best * (1 + 1e-9));
        }
    }
}

TEST_CASE("oracle outputs are phase-invariant")
{
    RandomStream rng(46);
    const CompoundParams cp{test::random_cvec(rng, 3), test::random_cvec(rng, 3)};
    for (const auto& w : {ssp_weights(cp).vector(), psp_weights(cp).vector(), egc_weights(cp).weights.vector()}) {
        CVec r = w;
        for (auto& x : r) {
            x *= std::polar(1.0, 1.234);
        }
        CHECK(objective_power(r, cp) == doctest::Approx(objective_power(w, cp)).epsilon(1e-12));
        CHECK(objective_snr(r, cp, 1.0) == doctest::Approx(objective_snr(w, cp, 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("no beamforming is the uniform vector")
{
    const double s = 1.0 / std::sqrt(3.0);
    CHECK(close(nobf_weights(3).weights(), CVec{s, s, s}));
    CHECK(nobf_weights(3) == init_weights(3, ConstraintKind::sum_power));
}
