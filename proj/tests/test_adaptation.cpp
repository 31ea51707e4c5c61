#include "doctest.h"

#include <cmath>

#include "pbbf/adaptation.hpp"
#include "pbbf/network.hpp"
#include "test_support.hpp"

using namespace pbbf;

namespace {

bool close(std::span<const cplx> a, const CVec& b, double tol = 1e-12)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol) {
            return false;
        }
    }
    return true;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("beam vectors enforce their constraint")
{
    CHECK_THROWS(BeamVector(CVec{1.0, 1.0}, ConstraintKind::sum_power));
    CHECK_NOTHROW(BeamVector(CVec{1.0, 1.0}, ConstraintKind::per_relay));
    CHECK_THROWS(BeamVector(CVec{0.5, 1.0}, ConstraintKind::per_relay));
    CHECK_THROWS(BeamVector(CVec{}, ConstraintKind::sum_power));
}

TEST_CASE("normalize examples")
{
    const CVec raw{cplx{3, 0}, cplx{0, 4}};
    const auto fb = BeamVector(CVec{1.0, 0.0}, ConstraintKind::sum_power);
    CHECK(close(normalize(raw, ConstraintKind::sum_power, fb).weights(), CVec{0.6, cplx{0, 0.8}}));
    const auto fbp = init_weights(2, ConstraintKind::per_relay);
    CHECK(close(normalize(raw, ConstraintKind::per_relay, fbp).weights(), CVec{1.0, cplx{0, 1}}));
    CHECK(close(normalize(CVec{0.0, 0.0}, ConstraintKind::sum_power, fb).weights(), CVec{1.0, 0.0}));
    // Per-relay fallback is elementwise.
    const auto fbq = BeamVector(CVec{cplx{0, 1}, cplx{-1, 0}}, ConstraintKind::per_relay);
    CHECK(close(normalize(CVec{2.0, 0.0}, ConstraintKind::per_relay, fbq).weights(), CVec{1.0, -1.0}));
}

TEST_CASE("init weights")
{
    const double s = 1.0 / std::sqrt(3.0);
    CHECK(close(init_weights(3, ConstraintKind::sum_power).weights(), CVec{s, s, s}));
    CHECK(close(init_weights(2, ConstraintKind::per_relay).weights(), CVec{1.0, 1.0}));
    CHECK(tr_init(3, ConstraintKind::sum_power).best_objective == 0.0);
    CHECK(tr_init(3, ConstraintKind::sum_power).frame_index == 0);
    CHECK_THROWS(tr_init(3, ConstraintKind::sum_power, 0.0));
    CHECK_THROWS(tr_init(3, ConstraintKind::sum_power, 1.5));
}

TEST_CASE("perturbation set layout")
{
    const auto pm = build_perturbation_set(2, Scheme::plus_minus);
    REQUIRE(pm.num_columns() == 4);
    CHECK(close(pm.column(0), CVec{kInvSqrt2, kInvSqrt2}));
    CHECK(close(pm.column(1), CVec{kInvSqrt2, -kInvSqrt2}));
    CHECK(close(pm.column(2), CVec{cplx{0, kInvSqrt2}, cplx{0, kInvSqrt2}}));
    CHECK(close(pm.column(3), CVec{cplx{0, kInvSqrt2}, cplx{0, -kInvSqrt2}}));

    const auto tr = build_perturbation_set(3, Scheme::take_reject);
    REQUIRE(tr.num_columns() == 12);
    for (std::size_t c = 0; c < 12; ++c) {
        double n = 0.0;
        for (const auto& x : tr.column(c)) {
            n += std::norm(x);
        }
        CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Last block is -jQ.
    CHECK(close(tr.column(9), CVec{cplx{0, -1 / std::sqrt(3.0)}, cplx{0, -1 / std::sqrt(3.0)},
                                   cplx{0, -1 / std::sqrt(3.0)}}));
    CHECK_THROWS(tr.column(12));
}

TEST_CASE("DFT matrix is unitary for every size")
{
    for (std::size_t r = 1; r <= 16; ++r) {
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) {
                cplx g{0, 0};
                for (std::size_t k = 0; k < r; ++k) {
                    g += std::conj(dft_entry(k, a, r)) * dft_entry(k, b, r);
                }
                CHECK(std::abs(g - cplx{a == b ? 1.0 : 0.0, 0.0}) < 1e-12);
            }
        }
    }
    CHECK(std::abs(dft_entry(1, 1, 4) - cplx{0, -0.5}) < 1e-15);
}

TEST_CASE("cyclic indexing uses every column once per period")
{
    const auto tr = build_perturbation_set(3, Scheme::take_reject);
    for (std::int64_t k = 0; k < 36; ++k) {
        const auto col = tr.column(static_cast<std::size_t>(k % 12));
        const auto got = tr.for_frame(k);
        CHECK(got.data() == col.data());
    }
    CHECK_THROWS(tr.for_frame(-1));
}

TEST_CASE("perturb examples")
{
    const auto w = BeamVector(CVec{1.0, 0.0}, ConstraintKind::sum_power);
    const CVec q{0.0, 1.0};
    CHECK(close(perturb_along(w, 1.0, q).weights(), CVec{kInvSqrt2, kInvSqrt2}));
    CHECK(close(perturb_along(w, -1.0, q).weights(), CVec{kInvSqrt2, -kInvSqrt2}));

    const auto tr_set = build_perturbation_set(3, Scheme::take_reject);
    const auto pm_set = build_perturbation_set(3, Scheme::plus_minus);
    const auto ts = tr_init(3, ConstraintKind::sum_power);
    CHECK(tr_perturb(ts, 0.0, tr_set) == ts.w_data);
    const auto ps = pm_init(3, ConstraintKind::sum_power);
    const auto pair = pm_perturb(ps, 0.0, pm_set);
    CHECK(pair.plus == ps.w_data);
    CHECK(pair.minus == ps.w_data);
    CHECK_THROWS(tr_perturb(ts, -0.1, tr_set));
    CHECK_THROWS(tr_perturb(ts, 0.1, pm_set));
    CHECK_THROWS(pm_perturb(ps, 0.1, tr_set));
}

TEST_CASE("tr_step examples")
{
    auto base = tr_init(2, ConstraintKind::sum_power);
    const auto cand = BeamVector(CVec{1.0, 0.0}, ConstraintKind::sum_power);

    base.best_objective = 0.5;
    auto taken = tr_step(base, cand, 1.0);
    CHECK(taken.feedback_bit == 1);
    CHECK(taken.state.best_objective == 1.0);
    CHECK(taken.state.w_data == cand);
    CHECK(taken.state.frame_index == 1);

    auto tie = tr_step(base, cand, 0.5);
    CHECK(tie.feedback_bit == 0);
    CHECK(tie.state.w_data == base.w_data);

    auto decayed = tr_init(2, ConstraintKind::sum_power, 0.5);
    decayed.best_objective = 1.0;
    auto retake = tr_step(decayed, cand, 0.6);
    CHECK(retake.feedback_bit == 1);
    CHECK(retake.state.best_objective == 0.6);

    CHECK_THROWS(tr_step(base, cand, -1.0));
}

TEST_CASE("pm_step examples")
{
    const auto set = build_perturbation_set(2, Scheme::plus_minus);
    const auto s = pm_init(2, ConstraintKind::sum_power);
    const auto pair = pm_perturb(s, 0.3, set);
    auto a = pm_step(s, pair, 1.0, 0.2);
    CHECK(a.feedback_bit == 0);
    CHECK(a.state.w_data == pair.plus);
    auto b = pm_step(s, pair, 0.2, 1.0);
    CHECK(b.feedback_bit == 1);
    CHECK(b.state.w_data == pair.minus);
    auto c = pm_step(s, pair, 0.7, 0.7);
    CHECK(c.feedback_bit == 0);
    CHECK(c.state.frame_index == 1);
}

TEST_CASE("relay-side updates mirror the destination")
{
    RandomStream rng(31);
    const auto set = build_perturbation_set(4, Scheme::take_reject);
    auto dest = tr_init(4, ConstraintKind::per_relay);
    auto relay = dest;
    for (int k = 0; k < 200; ++k) {
        const auto wt = tr_perturb(dest, 0.2, set);
        const auto step = tr_step(dest, wt, rng.uniform());
        dest = step.state;
        relay = tr_apply_feedback(relay, tr_perturb(relay, 0.2, set), step.feedback_bit);
        CHECK(relay.w_data == dest.w_data);
    }
}

TEST_CASE("T/R is monotone and every applied vector is feasible")
{
    RandomStream rng(32);
    for (auto constraint : {ConstraintKind::sum_power, ConstraintKind::per_relay}) {
        for (int real = 0; real < 50; ++real) {
            const CompoundParams cp{test::random_cvec(rng, 3), test::random_cvec(rng, 3)};
            const auto set = build_perturbation_set(3, Scheme::take_reject);
            auto st = tr_init(3, constraint);
            double prev = objective_snr(st.w_data.weights(), cp, 1.0);
            for (int k = 0; k < 500; ++k) {
                const auto wt = tr_perturb(st, 0.1, set);
                CHECK(satisfies(wt.weights(), constraint));
                st = tr_step(st, wt, objective_snr(wt.weights(), cp, 1.0)).state;
                const double cur = objective_snr(st.w_data.weights(), cp, 1.0);
                CHECK(cur >= prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("P/M candidates are feasible for both constraints")
{
    RandomStream rng(33);
    for (auto constraint : {ConstraintKind::sum_power, ConstraintKind::per_relay}) {
        const CompoundParams cp{test::random_cvec(rng, 5), test::random_cvec(rng, 5)};
        const auto set = build_perturbation_set(5, Scheme::plus_minus);
        auto st = pm_init(5, constraint);
        for (int k = 0; k < 300; ++k) {
            const auto pair = pm_perturb(st, 0.5, set);
            CHECK(satisfies(pair.plus.weights(), constraint));
            CHECK(satisfies(pair.minus.weights(), constraint));
            st = pm_step(st, pair, objective_power(pair.plus.weights(), cp),
                         objective_power(pair.minus.weights(), cp))
                     .state;
        }
    }
}
