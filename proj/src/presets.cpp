#include "detform/presets.hpp"

#include <fstream>
#include <stdexcept>

namespace detform {

ExperimentConfig desk_config() { return ExperimentConfig{}; }

ExperimentConfig paper_config() {
    ExperimentConfig cfg;
    cfg.scale = "paper";
    cfg.n_modes = 256;
    cfg.dt = 5e-5;
    cfg.mu = 150.0;
    cfg.secant_tol = 1e-12;
    return cfg;
}

ExperimentConfig config_for_scale(const std::string& scale) {
    if (scale == "desk") return desk_config();
    if (scale == "paper" || scale == "paper-scale") return paper_config();
    throw std::invalid_argument("unknown scale preset: " + scale + " (use desk or paper)");
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scale") {
        const auto preset = config_for_scale(value);
        const std::string keep_out = cfg.out_dir;
        cfg = preset;
        cfg.out_dir = keep_out;
    } else if (key == "n_modes")
        cfg.n_modes = std::stoi(value);
    else if (key == "nu")
        cfg.nu = std::stod(value);
    else if (key == "domain_length")
        cfg.domain_length = std::stod(value);
    else if (key == "dt")
        cfg.dt = std::stod(value);
    else if (key == "mu")
        cfg.mu = std::stod(value);
    else if (key == "cutoff")
        cfg.cutoff = std::stoi(value);
    else if (key == "s1")
        cfg.s1 = std::stod(value);
    else if (key == "s2")
        cfg.s2 = std::stod(value);
    else if (key == "theta_samples")
        cfg.theta_samples = std::stoi(value);
    else if (key == "tau_end")
        cfg.tau_end = std::stod(value);
    else if (key == "out_dir")
        cfg.out_dir = value;
    else if (key == "workers")
        cfg.workers = static_cast<unsigned>(std::stoul(value));
    else if (key == "spin_up")
        cfg.spin_up = std::stod(value);
    else if (key == "window")
        cfg.window = std::stod(value);
    else if (key == "dense_window")
        cfg.dense_window = std::stod(value);
    else if (key == "frame_stride")
        cfg.frame_stride = std::stod(value);
    else if (key == "secant_tol")
        cfg.secant_tol = std::stod(value);
    else if (key == "perturb_amplitude")
        cfg.perturb_amplitude = std::stod(value);
    else
        throw std::invalid_argument("unknown config key: " + key);
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r\n") != std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r\n");
            if (a == std::string::npos) return std::string{};
            const auto b = s.find_last_not_of(" \t\r\n");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) apply_config_entry(cfg, key, value);
    }
}

SolverConfig solver_config(const ExperimentConfig& cfg) {
    SolverConfig scfg;
    scfg.nu = cfg.nu;
    scfg.dt = cfg.dt;
    scfg.grid = cfg.grid();
    return scfg;
}

NudgingConfig nudging_config(const ExperimentConfig& cfg) {
    NudgingConfig ncfg;
    ncfg.mu = cfg.mu;
    ncfg.projector = ModalProjector{cfg.cutoff};
    ncfg.s1 = cfg.s1;
    ncfg.s2 = cfg.s2;
    ncfg.solver = solver_config(cfg);
    return ncfg;
}

OrbitOptions orbit_options(const ExperimentConfig& cfg) {
    OrbitOptions opts;
    opts.spin_up = cfg.spin_up;
    opts.window = cfg.window;
    opts.dense_window = cfg.dense_window;
    opts.frame_stride = cfg.frame_stride;
    opts.projector_cutoff = cfg.cutoff;
    opts.perturb_amplitude = cfg.perturb_amplitude;
    return opts;
}

} // namespace detform
