#include <doctest.h>

#include "sacsim/adaptive_law.hpp"
#include "sacsim/sim_engine.hpp"
#include "test_helpers.hpp"

using namespace sac;
using namespace sac::testing;

namespace {

Vector scalar(Scalar v) {
    return Vector::Constant(1, v);
}

GainWeights uniform10() {
    return GainWeights::uniform(10.0, 5.0, 1, 1, 1);
}

} // namespace

TEST_CASE("weight validation") {
    CHECK_THROWS_AS(GainWeights::uniform(10.0, 0.0, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(GainWeights::uniform(-1.0, 5.0, 1, 1, 1), std::invalid_argument);
    Matrix asym(2, 2);
    asym << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(GainWeights(asym, Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                Matrix::Identity(2, 2), 1.0),
                    std::invalid_argument);
}

TEST_CASE("proportional gains") {
    GainWeights w = uniform10();
    auto zero = proportional_gains(scalar(0.0), scalar(2.0), scalar(1.0), w);
    CHECK(zero.K_pe(0, 0) == 0.0);
    CHECK(zero.K_px(0, 0) == 0.0);
    CHECK(zero.K_pu(0, 0) == 0.0);

    // e = 0.5, x_m = 2, u_m = 1, all weights 10
    auto g = proportional_gains(scalar(0.5), scalar(2.0), scalar(1.0), w);
    CHECK(g.K_pe(0, 0) == doctest::Approx(2.5));
    CHECK(g.K_px(0, 0) == doctest::Approx(10.0));
    CHECK(g.K_pu(0, 0) == doctest::Approx(5.0));
}

TEST_CASE("integral gain derivatives") {
    GainWeights w = uniform10();
    AdaptiveGains gains = AdaptiveGains::zero(1, 1, 1);

    // pure leak: e = 0, K_Ie = 4, sigma = 5
    gains.K_Ie(0, 0) = 4.0;
    auto leak = integral_gain_derivatives(scalar(0.0), scalar(0.0), scalar(0.0), gains, w);
    CHECK(leak.dK_Ie(0, 0) == doctest::Approx(-20.0));
    CHECK(leak.dK_Ix(0, 0) == 0.0);
    CHECK(leak.dK_Iu(0, 0) == 0.0);

    // growth: e = 1, K_Ie = 0
    gains.K_Ie(0, 0) = 0.0;
    auto grow = integral_gain_derivatives(scalar(1.0), scalar(0.0), scalar(0.0), gains, w);
    CHECK(grow.dK_Ie(0, 0) == doctest::Approx(10.0));

    // the leak does not touch K_Ix / K_Iu unless leak_all is set
    gains.K_Ix(0, 0) = 3.0;
    gains.K_Iu(0, 0) = 2.0;
    auto no_leak = integral_gain_derivatives(scalar(0.0), scalar(0.0), scalar(0.0), gains, w);
    CHECK(no_leak.dK_Ix(0, 0) == 0.0);
    CHECK(no_leak.dK_Iu(0, 0) == 0.0);
    GainWeights leaky = uniform10();
    leaky.leak_all = true;
    auto all = integral_gain_derivatives(scalar(0.0), scalar(0.0), scalar(0.0), gains, leaky);
    CHECK(all.dK_Ix(0, 0) == doctest::Approx(-15.0));
    CHECK(all.dK_Iu(0, 0) == doctest::Approx(-10.0));
}

TEST_CASE("control signal") {
    GainWeights w = uniform10();
    AdaptiveGains gains = AdaptiveGains::zero(1, 1, 1);
    CHECK(control(scalar(0.0), scalar(0.0), scalar(0.0), gains, w)[0] == 0.0);

    // e = 1, K_Ie = 2, gamma_pe = 10: u = (10 + 2) * 1 = 12
    gains.K_Ie(0, 0) = 2.0;
    CHECK(control(scalar(1.0), scalar(0.0), scalar(0.0), gains, w)[0] == doctest::Approx(12.0));
}

TEST_CASE("sigma leak bounds the error gain under a constant injected error") {
    GainWeights w = uniform10();
    for (Scalar e_const : {0.3, 1.0, 2.0}) {
        Vector k = Vector::Zero(1);
        const Scalar dt = 1e-3;
        auto ode = [&](Scalar, const Vector& state) {
            AdaptiveGains g{Matrix::Constant(1, 1, state[0]), Matrix::Zero(1, 1),
                            Matrix::Zero(1, 1)};
            return Vector(integral_gain_derivatives(scalar(e_const), scalar(0.0), scalar(0.0), g,
                                                    w)
                              .dK_Ie.col(0));
        };
        const Scalar bound = e_const * e_const * 10.0 / w.sigma;
        Scalar peak = 0.0;
        for (int step = 0; step < 4000; ++step) {
            k = rk4_step(ode, k, step * dt, dt);
            peak = std::max(peak, std::abs(k[0]));
        }
        CHECK(peak <= bound + 1e-9);
        // converged to the fixed point gamma e^2 / sigma
        CHECK(k[0] == doctest::Approx(bound).epsilon(1e-6));
    }
}

TEST_CASE("zero error: K_Ie decays exponentially, K_Ix and K_Iu freeze") {
    GainWeights w = uniform10();
    const Scalar dt = 1e-3, k0 = 1.7;
    Vector state(3);
    state << k0, 0.4, -0.2; // [K_Ie, K_Ix, K_Iu]
    auto ode = [&](Scalar, const Vector& z) {
        AdaptiveGains g{Matrix::Constant(1, 1, z[0]), Matrix::Constant(1, 1, z[1]),
                        Matrix::Constant(1, 1, z[2])};
        auto d = integral_gain_derivatives(scalar(0.0), scalar(0.9), scalar(0.3), g, w);
        Vector dz(3);
        dz << d.dK_Ie(0, 0), d.dK_Ix(0, 0), d.dK_Iu(0, 0);
        return dz;
    };
    for (int step = 0; step < 1000; ++step) {
        state = rk4_step(ode, state, step * dt, dt);
        const Scalar t = (step + 1) * dt;
        CHECK(std::abs(state[0] - k0 * std::exp(-w.sigma * t)) <= 1e-6);
    }
    CHECK(state[1] == 0.4);
    CHECK(state[2] == -0.2);
}

TEST_CASE("K_pe is symmetric positive semidefinite for scaled-identity weights") {
    std::mt19937 gen(43);
    GainWeights w = GainWeights::uniform(3.0, 1.0, 3, 2, 1);
    for (int trial = 0; trial < 50; ++trial) {
        Vector e = random_vector(gen, 3);
        auto g = proportional_gains(e, random_vector(gen, 2), random_vector(gen, 1), w);
        CHECK((g.K_pe - g.K_pe.transpose()).norm() <= 1e-12 * (1.0 + g.K_pe.norm()));
        Eigen::SelfAdjointEigenSolver<Matrix> eig(g.K_pe);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
    }
}
