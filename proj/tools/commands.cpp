#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "readout/analysis.hpp"
#include "readout/coherent.hpp"
#include "readout/filters.hpp"
#include "readout/lindblad.hpp"

namespace readout::cli {

namespace {

using nlohmann::json;

std::ofstream open_csv(const std::string& out_dir, const std::string& name,
                       const ScenarioConfig& cfg, const std::string& command) {
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir + "/" + name);
    if (!f) throw ConfigError("cannot write to " + out_dir + "/" + name);
    json meta{{"command", command},
              {"schema_version", cfg.schema_version},
              {"seed", cfg.seed},
              {"dt_ns", cfg.dt_ns},
              {"n_traj", cfg.n_traj}};
    f << "# " << meta.dump() << "\n";
    f.precision(17);
    return f;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const GuardError& e) {
        std::cerr << "numerical guard failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int cmd_amplitudes(const ScenarioConfig& cfg, const std::string& out_dir) {
    return run_guarded([&] {
        const QutritCavityParams p = cfg.to_params();
        std::vector<double> grid;
        const double t_final = cfg.t_final_us * 1e-6;
        for (int k = 0; k < cfg.amplitudes_points; ++k)
            grid.push_back(t_final * k / (cfg.amplitudes_points - 1));
        const auto amps = evolve_amplitudes(p, CavityAmplitudes{}, grid);

        auto f = open_csv(out_dir, "amplitudes.csv", cfg, "amplitudes");
        f << "t_us,re_alpha_g,im_alpha_g,re_alpha_e,im_alpha_e,re_alpha_f,im_alpha_f,"
             "beta_ge,beta_gf,beta_ef,gamma_d_ge,gamma_d_gf,gamma_d_ef,"
             "gamma_m_ge,gamma_m_gf,gamma_m_ef\n";
        for (size_t i = 0; i < grid.size(); ++i) {
            const auto& a = amps[i];
            const DephasingRates r = dephasing_rates(a, p);
            f << fmt(grid[i] * 1e6) << ',' << fmt(a.alpha_g.real()) << ','
              << fmt(a.alpha_g.imag()) << ',' << fmt(a.alpha_e.real()) << ','
              << fmt(a.alpha_e.imag()) << ',' << fmt(a.alpha_f.real()) << ','
              << fmt(a.alpha_f.imag()) << ',' << fmt(std::abs(a.beta(0, 1))) << ','
              << fmt(std::abs(a.beta(0, 2))) << ',' << fmt(std::abs(a.beta(1, 2))) << ','
              << fmt(r.gamma_d_ge) << ',' << fmt(r.gamma_d_gf) << ',' << fmt(r.gamma_d_ef)
              << ',' << fmt(r.gamma_m_ge) << ',' << fmt(r.gamma_m_gf) << ','
              << fmt(r.gamma_m_ef) << "\n";
        }
    });
}

int cmd_sme(const ScenarioConfig& cfg, const std::string& out_dir) {
    return run_guarded([&] {
        const HeterodyneConfig h = cfg.to_heterodyne();
        const DensityMatrix rho0 = cfg.initial_state();
        const EnsembleResult ens = run_ensemble(h, rho0);
        if (ens.eta_above_geometric)
            std::cerr << "warning: eta exceeds kappa_out/kappa; efficiency is "
                         "physically capped by the output coupling\n";

        {
            auto f = open_csv(out_dir, "ensemble_mean.csv", cfg, "sme");
            f << "t_us,p_g,p_e,p_f,re_rho_ge,im_rho_ge,re_rho_gf,im_rho_gf,"
                 "re_rho_ef,im_rho_ef,entropy\n";
            for (size_t j = 0; j < ens.times.size(); ++j) {
                const Mat& m = ens.mean_states[j];
                f << fmt(ens.times[j] * 1e6) << ',' << fmt(m(0, 0).real()) << ','
                  << fmt(m(1, 1).real()) << ',' << fmt(m(2, 2).real()) << ','
                  << fmt(m(0, 1).real()) << ',' << fmt(m(0, 1).imag()) << ','
                  << fmt(m(0, 2).real()) << ',' << fmt(m(0, 2).imag()) << ','
                  << fmt(m(1, 2).real()) << ',' << fmt(m(1, 2).imag()) << ','
                  << fmt(von_neumann_entropy(DensityMatrix(m))) << "\n";
            }
        }

        const int n_save = std::min<int>(cfg.save_trajectories, cfg.n_traj);
        for (int t = 0; t < n_save; ++t) {
            char name[32];
            std::snprintf(name, sizeof name, "traj_%03d.csv", t);
            auto f = open_csv(out_dir, name, cfg, "sme");
            f << "t_us,v_i,v_q,p_g,p_e,p_f,abs_rho_ge,abs_rho_gf,abs_rho_ef,entropy\n";
            const TrajectoryResult& traj = ens.trajectories[size_t(t)];
            for (size_t j = 0; j < traj.times.size(); ++j) {
                const Mat& m = traj.states[j];
                const double vi = j < traj.record_i.size() ? traj.record_i[j] : 0.0;
                const double vq = j < traj.record_q.size() ? traj.record_q[j] : 0.0;
                f << fmt(traj.times[j] * 1e6) << ',' << fmt(vi) << ',' << fmt(vq) << ','
                  << fmt(m(0, 0).real()) << ',' << fmt(m(1, 1).real()) << ','
                  << fmt(m(2, 2).real()) << ',' << fmt(std::abs(m(0, 1))) << ','
                  << fmt(std::abs(m(0, 2))) << ',' << fmt(std::abs(m(1, 2))) << ','
                  << fmt(von_neumann_entropy(DensityMatrix(m))) << "\n";
            }
        }

        // time-averaged IQ points with nearest-centroid labels
        double t0 = cfg.window_t0_us * 1e-6, t1 = cfg.window_t1_us * 1e-6;
        if (t1 <= t0) {
            t0 = 0.0;
            t1 = ens.times.back();
        }
        ScatterSet scatter;
        scatter.centroids = predicted_centroids(h, t0, t1);
        for (const auto& traj : ens.trajectories)
            scatter.points.push_back(time_average_record(traj, t0, t1));

        auto f = open_csv(out_dir, "iq_points.csv", cfg, "sme");
        f << "traj,vbar_i,vbar_q,label\n";
        if (cfg.eta > 0.0) {
            const ClassificationResult cls = classify(scatter);
            const char* names[3] = {"g", "e", "f"};
            for (size_t i = 0; i < scatter.points.size(); ++i)
                f << i << ',' << fmt(scatter.points[i].vbar_i) << ','
                  << fmt(scatter.points[i].vbar_q) << ',' << names[cls.labels[i]] << "\n";
        } else {
            // no signal at eta = 0: the theory centroids coincide at the origin
            for (size_t i = 0; i < scatter.points.size(); ++i)
                f << i << ',' << fmt(scatter.points[i].vbar_i) << ','
                  << fmt(scatter.points[i].vbar_q) << ",-\n";
        }
    });
}

int cmd_sweep(const ScenarioConfig& cfg, const std::string& out_dir) {
    return run_guarded([&] {
        const QutritCavityParams p = cfg.to_params();
        std::vector<double> grid;
        for (int k = 0; k < cfg.sweep_points; ++k)
            grid.push_back((cfg.sweep_start_mhz +
                            (cfg.sweep_stop_mhz - cfg.sweep_start_mhz) * k /
                                (cfg.sweep_points - 1)) *
                           2.0 * M_PI * 1e6);
        const FrequencySweep sweep = frequency_sweep(p, grid);

        auto f = open_csv(out_dir, "sweep.csv", cfg, "sweep");
        f << "delta_rd_mhz,beta_ge,beta_gf,beta_ef\n";
        for (const auto& row : sweep.rows)
            f << fmt(row.delta_rd / (2.0 * M_PI * 1e6)) << ',' << fmt(row.sep_ge) << ','
              << fmt(row.sep_gf) << ',' << fmt(row.sep_ef) << "\n";
        f << "# argmax_ge_mhz = " << fmt(sweep.rows[size_t(sweep.argmax_ge)].delta_rd /
                                         (2.0 * M_PI * 1e6))
          << "\n";
    });
}

int cmd_ramsey(const ScenarioConfig& cfg, const std::string& out_dir) {
    return run_guarded([&] {
        auto f = open_csv(out_dir, "ramsey.csv", cfg, "ramsey");
        f << "t_free_us,p_g,p_e\n";
        for (int k = 0; k < cfg.ramsey_points; ++k) {
            const double t_free = cfg.ramsey_t_max_us * 1e-6 * k / (cfg.ramsey_points - 1);
            const auto [pg, pe] = ramsey_probabilities(
                cfg.ramsey_omega_d_mhz * 2.0 * M_PI * 1e6, cfg.ramsey_t_pi2_us * 1e-6,
                cfg.ramsey_delta_mhz * 2.0 * M_PI * 1e6, cfg.ramsey_gamma2_per_us * 1e6,
                t_free);
            f << fmt(t_free * 1e6) << ',' << fmt(pg) << ',' << fmt(pe) << "\n";
        }
    });
}

int cmd_filters(const ScenarioConfig& cfg, const std::string& out_dir) {
    return run_guarded([&] {
        const double t = cfg.filter_t_us * 1e-6;
        {
            auto f = open_csv(out_dir, "filters.csv", cfg, "filters");
            f << "omega_mhz,g_ramsey,g_cp\n";
            for (int k = 0; k < cfg.filter_points; ++k) {
                const double w =
                    cfg.filter_omega_max_mhz * 2.0 * M_PI * 1e6 * k / (cfg.filter_points - 1);
                f << fmt(w / (2.0 * M_PI * 1e6)) << ',' << fmt(ramsey_filter(w, t)) << ','
                  << fmt(cp_filter(w, t, cfg.filter_cp_n)) << "\n";
            }
        }
        const NoiseSpectrum spectrum =
            cfg.filter_spectrum == "white"
                ? NoiseSpectrum::white(cfg.filter_s0_mhz * 2.0 * M_PI * 1e6)
                : NoiseSpectrum::lorentzian(cfg.filter_s0_mhz * 2.0 * M_PI * 1e6,
                                            cfg.filter_omega_c_mhz * 2.0 * M_PI * 1e6);
        auto f = open_csv(out_dir, "decay.csv", cfg, "filters");
        f << "t_us,coherence_ramsey,coherence_cp\n";
        for (int k = 1; k <= 10; ++k) {
            const double tk = t * k / 10.0;
            const double cr = coherence_decay(
                spectrum, [tk](double w) { return ramsey_filter(w, tk); }, tk);
            const double cc = coherence_decay(
                spectrum, [&, tk](double w) { return cp_filter(w, tk, cfg.filter_cp_n); }, tk);
            f << fmt(tk * 1e6) << ',' << fmt(cr) << ',' << fmt(cc) << "\n";
        }
    });
}

}  // namespace readout::cli
