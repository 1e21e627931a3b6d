#include "scenario_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace readout::cli {

namespace {

constexpr double kMHz = 2.0 * M_PI * 1e6;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_rate(double lifetime_us) { return lifetime_us > 0.0 ? 1e6 / lifetime_us : 0.0; }

struct FieldTable {
    std::map<std::string, std::function<void(ScenarioConfig&, const std::string&)>> set;
    std::vector<std::pair<std::string, std::function<std::string(const ScenarioConfig&)>>> get;

    template <typename T>
    void add(const std::string& key, T ScenarioConfig::* member) {
        set[key] = [key, member](ScenarioConfig& c, const std::string& raw) {
            std::istringstream ss(raw);
            T value{};
            if constexpr (std::is_same_v<T, bool>) {
                int v = 0;
                ss >> v;
                value = (v != 0);
            } else {
                ss >> value;
            }
            if (ss.fail() || !(ss >> std::ws).eof())
                throw ConfigError("invalid value for '" + key + "': " + raw);
            c.*member = value;
        };
        get.emplace_back(key, [member](const ScenarioConfig& c) {
            std::ostringstream ss;
            ss.precision(17);
            if constexpr (std::is_same_v<T, bool>)
                ss << int(c.*member);
            else
                ss << c.*member;
            return ss.str();
        });
    }
};

const FieldTable& fields() {
    static const FieldTable table = [] {
        FieldTable t;
        t.add("schema_version", &ScenarioConfig::schema_version);
        t.add("omega_q_mhz", &ScenarioConfig::omega_q_mhz);
        t.add("alpha_q_mhz", &ScenarioConfig::alpha_q_mhz);
        t.add("chi_qr_mhz", &ScenarioConfig::chi_qr_mhz);
        t.add("delta_rd_mhz", &ScenarioConfig::delta_rd_mhz);
        t.add("kappa_in_mhz", &ScenarioConfig::kappa_in_mhz);
        t.add("kappa_out_mhz", &ScenarioConfig::kappa_out_mhz);
        t.add("kappa_int_mhz", &ScenarioConfig::kappa_int_mhz);
        t.add("a_in_re", &ScenarioConfig::a_in_re);
        t.add("a_in_im", &ScenarioConfig::a_in_im);
        t.add("t1_ge_us", &ScenarioConfig::t1_ge_us);
        t.add("t1_gf_us", &ScenarioConfig::t1_gf_us);
        t.add("t1_ef_us", &ScenarioConfig::t1_ef_us);
        t.add("tphi_ge_us", &ScenarioConfig::tphi_ge_us);
        t.add("tphi_gf_us", &ScenarioConfig::tphi_gf_us);
        t.add("tphi_ef_us", &ScenarioConfig::tphi_ef_us);
        t.add("eta", &ScenarioConfig::eta);
        t.add("phi_lo_deg", &ScenarioConfig::phi_lo_deg);
        t.add("dt_ns", &ScenarioConfig::dt_ns);
        t.add("t_final_us", &ScenarioConfig::t_final_us);
        t.add("n_traj", &ScenarioConfig::n_traj);
        t.add("seed", &ScenarioConfig::seed);
        t.add("output_stride", &ScenarioConfig::output_stride);
        t.add("n_threads", &ScenarioConfig::n_threads);
        t.add("steady_state", &ScenarioConfig::steady_state);
        t.add("save_trajectories", &ScenarioConfig::save_trajectories);
        t.add("rho0", &ScenarioConfig::rho0);
        t.add("window_t0_us", &ScenarioConfig::window_t0_us);
        t.add("window_t1_us", &ScenarioConfig::window_t1_us);
        t.add("n_max", &ScenarioConfig::n_max);
        t.add("amplitudes_points", &ScenarioConfig::amplitudes_points);
        t.add("sweep_start_mhz", &ScenarioConfig::sweep_start_mhz);
        t.add("sweep_stop_mhz", &ScenarioConfig::sweep_stop_mhz);
        t.add("sweep_points", &ScenarioConfig::sweep_points);
        t.add("ramsey_omega_d_mhz", &ScenarioConfig::ramsey_omega_d_mhz);
        t.add("ramsey_t_pi2_us", &ScenarioConfig::ramsey_t_pi2_us);
        t.add("ramsey_delta_mhz", &ScenarioConfig::ramsey_delta_mhz);
        t.add("ramsey_gamma2_per_us", &ScenarioConfig::ramsey_gamma2_per_us);
        t.add("ramsey_t_max_us", &ScenarioConfig::ramsey_t_max_us);
        t.add("ramsey_points", &ScenarioConfig::ramsey_points);
        t.add("filter_t_us", &ScenarioConfig::filter_t_us);
        t.add("filter_cp_n", &ScenarioConfig::filter_cp_n);
        t.add("filter_omega_max_mhz", &ScenarioConfig::filter_omega_max_mhz);
        t.add("filter_points", &ScenarioConfig::filter_points);
        t.add("filter_spectrum", &ScenarioConfig::filter_spectrum);
        t.add("filter_s0_mhz", &ScenarioConfig::filter_s0_mhz);
        t.add("filter_omega_c_mhz", &ScenarioConfig::filter_omega_c_mhz);
        return t;
    }();
    return table;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse(std::istream& in) {
    ScenarioConfig cfg;
    bool saw_version = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = fields().set.find(key);
        if (it == fields().set.end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        it->second(cfg, value);
        if (key == "schema_version") saw_version = true;
    }
    if (!saw_version) throw ConfigError("missing required key 'schema_version'");
    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in);
}

std::string ScenarioConfig::serialize() const {
    std::ostringstream out;
    for (const auto& [key, getter] : fields().get) out << key << " = " << getter(*this) << "\n";
    return out.str();
}

void ScenarioConfig::validate() const {
    if (schema_version != 1)
        throw ConfigError("schema_version must be 1, got " + std::to_string(schema_version));
    auto nonneg = [](double v, const char* key) {
        if (v < 0.0) throw ConfigError(std::string(key) + " must be >= 0");
    };
    nonneg(kappa_in_mhz, "kappa_in_mhz");
    nonneg(kappa_out_mhz, "kappa_out_mhz");
    nonneg(kappa_int_mhz, "kappa_int_mhz");
    nonneg(t1_ge_us, "t1_ge_us");
    nonneg(t1_gf_us, "t1_gf_us");
    nonneg(t1_ef_us, "t1_ef_us");
    nonneg(tphi_ge_us, "tphi_ge_us");
    nonneg(tphi_gf_us, "tphi_gf_us");
    nonneg(tphi_ef_us, "tphi_ef_us");
    if (eta < 0.0 || eta > 1.0) throw ConfigError("eta must lie in [0,1]");
    if (dt_ns <= 0.0) throw ConfigError("dt_ns must be > 0");
    if (t_final_us <= 0.0) throw ConfigError("t_final_us must be > 0");
    if (n_traj < 1) throw ConfigError("n_traj must be >= 1");
    if (output_stride < 1) throw ConfigError("output_stride must be >= 1");
    if (save_trajectories < 0) throw ConfigError("save_trajectories must be >= 0");
    if (rho0 != "g" && rho0 != "e" && rho0 != "f" && rho0 != "mixed" && rho0 != "demo")
        throw ConfigError("rho0 must be one of g|e|f|mixed|demo, got '" + rho0 + "'");
    if (amplitudes_points < 2) throw ConfigError("amplitudes_points must be >= 2");
    if (sweep_points < 2) throw ConfigError("sweep_points must be >= 2");
    if (ramsey_points < 2) throw ConfigError("ramsey_points must be >= 2");
    if (filter_points < 2) throw ConfigError("filter_points must be >= 2");
    if (filter_cp_n < 2 || filter_cp_n % 2 != 0)
        throw ConfigError("filter_cp_n must be an even integer >= 2");
    if (filter_spectrum != "white" && filter_spectrum != "lorentzian")
        throw ConfigError("filter_spectrum must be white|lorentzian");
}

QutritCavityParams ScenarioConfig::to_params() const {
    QutritCavityParams p;
    p.omega_q = omega_q_mhz * kMHz;
    p.alpha_q = alpha_q_mhz * kMHz;
    p.chi_qr = chi_qr_mhz * kMHz;
    p.delta_rd = delta_rd_mhz * kMHz;
    p.kappa_in = kappa_in_mhz * kMHz;
    p.kappa_out = kappa_out_mhz * kMHz;
    p.kappa_int = kappa_int_mhz * kMHz;
    p.a_in_bar = Cplx(a_in_re, a_in_im) * 1e3;  // sqrt(1/us) -> sqrt(1/s)
    p.gamma_1_ge = to_rate(t1_ge_us);
    p.gamma_1_gf = to_rate(t1_gf_us);
    p.gamma_1_ef = to_rate(t1_ef_us);
    p.gamma_phi_ge = to_rate(tphi_ge_us);
    p.gamma_phi_gf = to_rate(tphi_gf_us);
    p.gamma_phi_ef = to_rate(tphi_ef_us);
    p.validate();
    return p;
}

HeterodyneConfig ScenarioConfig::to_heterodyne() const {
    HeterodyneConfig h;
    h.params = to_params();
    h.phi_lo = phi_lo_deg * M_PI / 180.0;
    h.eta = eta;
    h.dt = dt_ns * 1e-9;
    h.n_traj = n_traj;
    h.seed = seed;
    h.output_stride = output_stride;
    h.n_threads = n_threads;
    h.freeze_at_steady_state = steady_state;
    // round the horizon onto a whole number of strided steps
    const double raw_steps = t_final_us * 1e-6 / h.dt;
    const long long blocks =
        std::max(1ll, std::llround(raw_steps / output_stride));
    h.t_final = double(blocks * output_stride) * h.dt;
    return h;
}

DensityMatrix ScenarioConfig::initial_state() const {
    Mat m = Mat::Zero(3, 3);
    if (rho0 == "g") m(0, 0) = 1.0;
    else if (rho0 == "e") m(1, 1) = 1.0;
    else if (rho0 == "f") m(2, 2) = 1.0;
    else if (rho0 == "mixed") m = Mat::Identity(3, 3) / 3.0;
    else {
        m << 0.5, 0.3, 0.36, 0.3, 0.2, 0.24, 0.36, 0.24, 0.3;
    }
    return DensityMatrix(std::move(m));
}

}  // namespace readout::cli
