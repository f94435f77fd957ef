// presets.hpp — experiment configuration: named scale presets, key-value
// config files, and the derived solver/nudging configs.

#pragma once

#include <string>

#include "detform/nudging.hpp"

namespace detform {

struct ExperimentConfig {
    std::string scale = "desk"; // desk (64^2, dt 2e-4, mu 50) or paper (256^2, dt 5e-5, mu 150)
    int n_modes = 64;
    double nu = 1.0;
    double domain_length = 2.0 * M_PI;
    double dt = 2e-4;
    double mu = 50.0;
    int cutoff = 5;
    double s1 = 1.0;
    double s2 = 1.5;
    int theta_samples = 150;
    double tau_end = 0.0; // 0 = choose from the sampled table
    std::string out_dir = "out";
    unsigned workers = 0; // 0 = all hardware threads
    double spin_up = 50.0;
    double window = 10.0;
    double dense_window = 3.0;
    double frame_stride = 0.025;
    double secant_tol = 1e-6;
    double perturb_amplitude = 1.0; // orbit seed: omega_hat(1,1) offset

    Grid grid() const { return make_grid(n_modes, domain_length); }
};

ExperimentConfig desk_config();
ExperimentConfig paper_config();
ExperimentConfig config_for_scale(const std::string& scale);

// key = value lines, '#' comments; unknown keys are an error.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

SolverConfig solver_config(const ExperimentConfig& cfg);
NudgingConfig nudging_config(const ExperimentConfig& cfg);
OrbitOptions orbit_options(const ExperimentConfig& cfg);

} // namespace detform
