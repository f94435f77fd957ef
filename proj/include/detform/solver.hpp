// solver.hpp — time integration of the 2D NSE in vorticity form with a
// third-order Adams-Bashforth scheme and an exact integrating factor for the
// dissipative part, plus construction of the reference steady state, force,
// and periodic orbit.

#pragma once

#include <functional>
#include <optional>

#include "detform/trajectory.hpp"

namespace detform {

enum class Scheme { AB3_IF };

struct SolverConfig {
    double nu = 1.0;
    double dt = 2e-4;
    Grid grid;
    Scheme scheme = Scheme::AB3_IF;
    double cfl_limit = 1.0;
};

// Steady vorticity on the |k|^2 = 25 shell and its matching force curl.  The
// single-shell support makes the advection term vanish identically, so
// omega_star is an exact steady state of the forced equation.
struct ReferenceProblem {
    SpectralField omega_star;
    SpectralField phi; // curl of the force, phi_hat = 25 * omega_star_hat
};

ReferenceProblem make_reference_problem(const Grid& grid);

// Explicit right-hand side -u.grad(omega) + phi.  The -nu*A*omega term is not
// included; the stepper handles it exactly through the integrating factor.
SpectralField nse_rhs(const SpectralTransform& transform, const SpectralField& omega,
                      const SpectralField& phi, double nu);

// Generic AB3-IF driver.  The explicit part supplied by `rhs` excludes both
// diffusion (integrating factor) and the constant force `phi` (integrated
// exactly per mode, which keeps forced steady states exact fixed points of
// the discrete update).  Bootstrap: step one is predicted by ten
// integrating-factor Euler substeps and corrected by an IF-trapezoid pass;
// step two uses two-term Adams-Bashforth.
class Ab3Integrator {
  public:
    // out = explicit part at (w, s); max_speed = max |u| component in
    // physical space, for the CFL check.
    using ExplicitRhs =
        std::function<void(const SpectralField& w, double s, SpectralField& out, double& max_speed)>;
    // Called with the state after every completed step (and once at s0).
    using StepCallback = std::function<void(size_t step, double s, const SpectralField& w)>;

    Ab3Integrator(const SolverConfig& cfg, const SpectralField* phi);

    void run(SpectralField& w, double s0, size_t n_steps, const ExplicitRhs& rhs,
             const StepCallback& callback = nullptr);

    double cfl_max() const { return cfl_max_; }

  private:
    void check_cfl(double max_speed, double s) const;
    void apply_update(SpectralField& w, const std::vector<double>& weights,
                      const SpectralField* const* hist) const;

    SolverConfig cfg_;
    const SpectralField* phi_ = nullptr;
    std::vector<double> decay1_, decay2_, decay3_; // exp(-nu*lambda*j*dt)
    std::vector<Complex> force_dt_;                // exact force increment over dt
    std::vector<double> sub_decay_;                // Euler substep factors
    std::vector<Complex> sub_force_;
    mutable double cfl_max_ = 0.0;
};

// Forced NSE trajectory on [0, s_end], frames stored every `stride`
// (a positive integer multiple of cfg.dt).
Trajectory solve_nse(const SpectralField& omega0, const ReferenceProblem& prob,
                     const SolverConfig& cfg, double s_end, double stride);

struct OrbitOptions {
    double spin_up = 50.0;       // transient discarded before storage
    double window = 10.0;        // stored window length
    double dense_window = 3.0;   // dense projected storage (every step)
    double frame_stride = 0.025; // full-field frame interval
    int projector_cutoff = 5;
    double perturb_amplitude = 1.0; // added to omega_hat(1,1) (+ conjugate)
};

struct OrbitData {
    Trajectory full;                // full fields, stride = frame_stride, [0, window]
    Trajectory projected;           // projected fields at dt on the observation grid
    std::vector<double> observable; // Re omega_hat(1,1) at every step over [0, window]
    double dt = 0.0;
    double period = 0.0;
    double recurrence_error = 1.0;
    bool degenerate = false;
};

// Spin up from omega_star plus a (1,1)-mode perturbation and return the
// post-transient orbit together with a periodicity diagnostic: dominant
// period from the autocorrelation of a low-mode observable, refined by
// minimizing the projected recurrence error
//   R(P) = sup_s |J u(s+P) - J u(s)| / sup_s |J u(s)|.
OrbitData generate_orbit(const ReferenceProblem& prob, const SolverConfig& cfg,
                         const OrbitOptions& opts = {});

// Observation grid: the smallest grid whose dealias box matches the
// projector cutoff (n = 16 holds exactly |k1|,|k2| <= 5).
Grid observation_grid(int cutoff, double domain_length);

} // namespace detform
