#include <doctest.h>

#include <cmath>
#include <vector>

#include "readout/effective.hpp"
#include "readout/lindblad.hpp"

using namespace readout;

namespace {

constexpr double kTwoPiMHz = 2.0 * M_PI * 1e6;

QutritCavityParams driven_params(double photons_g = 1.0) {
    QutritCavityParams p;
    p.chi_qr = 0.6 * kTwoPiMHz;
    p.kappa_in = 0.5 * 2.7 * kTwoPiMHz;
    p.kappa_out = 0.5 * 2.7 * kTwoPiMHz;
    p.a_in_bar = std::sqrt(photons_g) * 0.5 * p.kappa() / std::sqrt(p.kappa_in);
    return p;
}

DensityMatrix demo_initial_state() {
    Mat m(3, 3);
    m << 0.5, 0.3, 0.36, 0.3, 0.2, 0.24, 0.36, 0.24, 0.3;
    return DensityMatrix(std::move(m));
}

// test-local oracle: RK4 on the three rate equations
std::array<double, 3> rk4_populations(const QutritCavityParams& p,
                                      std::array<double, 3> pop, double t, int steps) {
    auto deriv = [&](const std::array<double, 3>& v) {
        return std::array<double, 3>{
            p.gamma_1_ge * v[1] + p.gamma_1_gf * v[2],
            -p.gamma_1_ge * v[1] + p.gamma_1_ef * v[2],
            -(p.gamma_1_gf + p.gamma_1_ef) * v[2]};
    };
    const double h = t / steps;
    for (int s = 0; s < steps; ++s) {
        const auto k1 = deriv(pop);
        std::array<double, 3> tmp;
        for (int i = 0; i < 3; ++i) tmp[i] = pop[i] + 0.5 * h * k1[i];
        const auto k2 = deriv(tmp);
        for (int i = 0; i < 3; ++i) tmp[i] = pop[i] + 0.5 * h * k2[i];
        const auto k3 = deriv(tmp);
        for (int i = 0; i < 3; ++i) tmp[i] = pop[i] + h * k3[i];
        const auto k4 = deriv(tmp);
        for (int i = 0; i < 3; ++i)
            pop[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return pop;
}

}  // namespace

TEST_CASE("population rate equations") {
    SUBCASE("no decay keeps populations frozen") {
        QutritCavityParams p;
        const auto pops = evolve_populations(p, {0.2, 0.5, 0.3}, {0.0, 1e-3, 1.0});
        for (const auto& v : pops) {
            CHECK(v[0] == doctest::Approx(0.2).epsilon(1e-14));
            CHECK(v[1] == doctest::Approx(0.5).epsilon(1e-14));
            CHECK(v[2] == doctest::Approx(0.3).epsilon(1e-14));
        }
    }
    SUBCASE("single channel decays exponentially") {
        QutritCavityParams p;
        p.gamma_1_ge = 2e4;
        const double t = 1e-4;
        const auto pops = evolve_populations(p, {0.0, 1.0, 0.0}, {0.0, t});
        CHECK(pops.back()[1] == doctest::Approx(std::exp(-p.gamma_1_ge * t)).epsilon(1e-12));
        CHECK(pops.back()[0] + pops.back()[1] + pops.back()[2] ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("f -> e -> g cascade matches the brute-force oracle") {
        QutritCavityParams p;
        p.gamma_1_ge = 1.0 / 35e-6;
        p.gamma_1_ef = 1.0 / 35e-6;
        p.gamma_1_gf = 1.0 / 1e-3;
        const double t = 80e-6;
        const auto pops = evolve_populations(p, {0.0, 0.0, 1.0}, {0.0, t});
        const auto brute = rk4_populations(p, {0.0, 0.0, 1.0}, t, 20000);
        for (int i = 0; i < 3; ++i)
            CHECK(pops.back()[i] == doctest::Approx(brute[i]).epsilon(1e-9));
        // the analytic two-exponential form for the intermediate level
        const double ge = p.gamma_1_ge, ef = p.gamma_1_ef, gf = p.gamma_1_gf;
        const double p_e = ef / (gf + ef - ge) *
                           (std::exp(-ge * t) - std::exp(-(gf + ef) * t));
        CHECK(pops.back()[1] == doctest::Approx(p_e).epsilon(1e-10));
    }
    SUBCASE("invalid populations are rejected") {
        QutritCavityParams p;
        CHECK_THROWS_AS(evolve_populations(p, {0.9, 0.3, 0.1}, {0.0, 1.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("effective state evolution") {
    SUBCASE("undriven dephasing is exactly exponential") {
        QutritCavityParams p;
        p.gamma_phi_ge = 3e5;
        p.gamma_phi_gf = 1e5;
        p.gamma_phi_ef = 2e5;
        EffectiveQutritModel model{p};
        const DensityMatrix rho0 = demo_initial_state();
        const double t = 6e-6;
        const auto states = evolve_effective_state(model, rho0, {0.0, t});
        CHECK(std::abs(states.back().mat(0, 1)) ==
              doctest::Approx(0.3 * std::exp(-p.gamma_phi_ge * t)).epsilon(1e-9));
        CHECK(std::abs(states.back().mat(0, 2)) ==
              doctest::Approx(0.36 * std::exp(-p.gamma_phi_gf * t)).epsilon(1e-9));
        CHECK(std::abs(states.back().mat(1, 2)) ==
              doctest::Approx(0.24 * std::exp(-p.gamma_phi_ef * t)).epsilon(1e-9));
    }

    SUBCASE("measurement keeps populations and erases coherence") {
        const QutritCavityParams p = driven_params(2.0);
        EffectiveQutritModel model{p};
        const DensityMatrix rho0 = demo_initial_state();
        std::vector<double> grid;
        const double t_final = 80.0 / p.kappa();
        for (int k = 0; k <= 80; ++k) grid.push_back(k * t_final / 80.0);
        const auto states = evolve_effective_state(model, rho0, grid);
        for (const auto& s : states) {
            CHECK(s.mat(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(s.mat(1, 1).real() == doctest::Approx(0.2).epsilon(1e-12));
            CHECK(s.mat(2, 2).real() == doctest::Approx(0.3).epsilon(1e-12));
            CHECK(s.trace_error() < 1e-12);
        }
        CHECK(std::abs(states.back().mat(0, 1)) < 2e-3);
        CHECK(std::abs(states.back().mat(0, 2)) < 2e-3);
        CHECK(std::abs(states.back().mat(1, 2)) < 2e-3);
    }

    SUBCASE("coherences equal the positive-P envelopes when gamma_1 = 0") {
        QutritCavityParams p = driven_params(1.5);
        p.gamma_phi_ge = 5e4;
        EffectiveQutritModel model{p};
        const DensityMatrix rho0 = demo_initial_state();
        std::vector<double> grid;
        for (int k = 0; k <= 40; ++k) grid.push_back(k * 1e-7);
        const auto states = evolve_effective_state(model, rho0, grid);
        const auto amps = evolve_amplitudes(p, CavityAmplitudes{}, grid);
        const auto envs = evolve_coherences(
            p, amps, {rho0.mat(0, 1), rho0.mat(0, 2), rho0.mat(1, 2)}, grid);
        for (size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(states[i].mat(0, 1) - envs[i].c_ge) < 1e-12);
            CHECK(std::abs(states[i].mat(0, 2) - envs[i].c_gf) < 1e-12);
            CHECK(std::abs(states[i].mat(1, 2) - envs[i].c_ef) < 1e-12);
        }
    }

    SUBCASE("matches the partial-traced composite oracle without decay") {
        const QutritCavityParams p = driven_params(1.0);
        const FockConfig cfg{10};
        const LindbladModel oracle = build_composite_generator(p, cfg);

        Vec qutrit(3);
        qutrit << std::sqrt(0.5), std::sqrt(0.2), std::sqrt(0.3);
        Vec full = Vec::Zero(3 * cfg.n_max);
        for (int a = 0; a < 3; ++a) full(a * cfg.n_max) = qutrit(a);
        const DensityMatrix rho_sr0 = DensityMatrix(Mat(full * full.adjoint()));
        const DensityMatrix rho_s0 =
            DensityMatrix(Mat(Vec(qutrit) * Vec(qutrit).adjoint()));

        std::vector<double> grid;
        for (int k = 0; k <= 10; ++k) grid.push_back(k * 0.3 / p.kappa());
        const auto oracle_states = evolve_lindblad(oracle, rho_sr0, grid);
        const auto eff_states =
            evolve_effective_state(EffectiveQutritModel{p}, rho_s0, grid);
        for (size_t i = 0; i < grid.size(); ++i) {
            const Mat red = partial_trace_cavity(oracle_states[i].mat, cfg.n_max);
            CHECK((red - eff_states[i].mat).cwiseAbs().maxCoeff() < 1e-4);
        }
    }

    SUBCASE("positivity surrogate holds along driven evolution") {
        QutritCavityParams p = driven_params(2.0);
        p.gamma_1_ge = 2e4;
        p.gamma_1_ef = 2e4;
        EffectiveQutritModel model{p};
        const DensityMatrix rho0 = demo_initial_state();
        std::vector<double> grid;
        for (int k = 0; k <= 50; ++k) grid.push_back(k * 2e-7);
        const auto states = evolve_effective_state(model, rho0, grid);
        for (const auto& s : states) {
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b)
                    CHECK(std::abs(s.mat(a, b)) <=
                          std::sqrt(s.mat(a, a).real() * s.mat(b, b).real()) + 1e-9);
        }
    }

    SUBCASE("steady-state dephasing source uses the frozen rates") {
        QutritCavityParams p = driven_params(1.0);
        EffectiveQutritModel model{p, DephasingSource::steady_state};
        const DensityMatrix rho0 = demo_initial_state();
        const double t = 2e-6;
        const auto states = evolve_effective_state(model, rho0, {0.0, t});
        const DephasingRates ss = steady_state_dephasing(p);
        CHECK(std::abs(states.back().mat(0, 1)) ==
              doctest::Approx(0.3 * std::exp(-ss.gamma_d_ge * t)).epsilon(1e-9));
    }
}
