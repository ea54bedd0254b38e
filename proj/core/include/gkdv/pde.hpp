#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gkdv/approx.hpp"
#include "gkdv/params.hpp"

namespace gkdv {
namespace pde {

/// Periodic pseudospectral state for  u_t + (u_xx + u^p)_x = 0.
/// Exact linear flow e^{i k^3 t}; classical 4-stage exponential integrator for
/// the nonlinear term; modes above the 2/(p+1) fraction of Nyquist are zeroed
/// after every nonlinear product.
class Field {
public:
    Field(int p, double x_left, double domain_length, int n);
    ~Field();
    Field(Field&&) noexcept;
    Field& operator=(Field&&) noexcept;
    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;
    Field clone() const;

    int exponent() const { return p_; }
    int size() const { return n_; }
    double domain_length() const { return L_; }
    double x_left() const { return x_left_; }
    double spacing() const { return L_ / n_; }
    double x(int i) const { return x_left_ + spacing() * i; }
    double time() const { return t_; }
    void set_time(double t) { t_ = t; }

    void set_samples(const std::vector<double>& u);
    const std::vector<double>& samples() const;

    // One ETDRK4 step (dt may be negative; the equation is time-reversible).
    void step(double dt);

    // Spatial reflection about the domain center (with x_left fixed).
    void reflect();

    // Shift the window right by the given cell count (contents rotate).
    void recenter(int cells);

    struct Conserved {
        double mass = 0, l2mass = 0, energy = 0;
    };
    Conserved conserved() const;

    double max_abs() const;
    double boundary_amplitude(int margin_cells = 8) const;

    double blow_limit = 50.0;

private:
    int p_ = 4, n_ = 0;
    double x_left_ = 0, L_ = 0, t_ = 0;
    std::vector<std::complex<double>> uhat_;
    mutable std::vector<double> cache_;
    mutable bool cache_ok_ = false;
    struct Engine; // FFTW plans, scratch, ETDRK4 tables
    std::unique_ptr<Engine> eng_;

    void nonlinear(const std::vector<std::complex<double>>& in,
                   std::vector<std::complex<double>>& out) const;
    void ensure_tables(double dt);
};

/// Subgrid peak positions/amplitudes of the two solitons (quartic refinement).
struct Peaks {
    bool found_two = false;
    double rho1 = 0, amp1 = 0; // larger soliton
    double rho2 = 0, amp2 = 0;
};
Peaks find_peaks(const Field& f, double min_amp2, double min_separation);

// c from the peak amplitude: c = (amp / Q(0))^{p-1}.
double speed_from_amplitude(int p, double amp);

// psi(x) = (2/pi) arctan(e^{-x/4}); localized mass  ∫ u^2 psi(lambda (x - center)) dx.
double localized_mass(const Field& f, double center, double lambda);

struct TrackPoint {
    double t = 0;
    bool valid = false;
    double rho1 = 0, c1 = 0, rho2 = 0, c2 = 0;
    double mass = 0, l2mass = 0, energy = 0;
    double defect_h1c = -1.0; // -1 when not evaluated
};

enum class Source { ApproxV, VSharp, P2Explicit, PureSum, SingleSoliton };

struct CollideConfig {
    SolitonParams prm;
    Source source = Source::PureSum;
    double T_run = 0;     // 0: auto
    double dt = 0;        // 0: auto from the CFL-like rule
    double L_dom = 0;     // 0: auto
    int n = 0;            // 0: auto (power of two)
    double h_target = 0.1;
    double sample_every = 2.0;
    double dt_scale = 1.0; // multiplies the auto dt
    const ApproxSolution* approx = nullptr; // required for ApproxV / VSharp
};

struct DefectWindow {
    double left = 0, right = 0; // behind the slow soliton
    double gap_left = 0, gap_right = 0;
};

struct CollisionReport {
    int p = 4;
    double c = 0;
    std::string source;
    double T_run = 0, T_c = 0, dt = 0, L_dom = 0;
    int n = 0;
    double Delta1 = 0, Delta2 = 0;         // trajectory intercept differences
    double c1_minus = 0, c2_minus = 0;     // asymptotic input speeds (amplitude)
    double c1_plus = 0, c2_plus = 0;       // asymptotic output speeds (amplitude)
    double defect_l2 = 0, defect_dx_l2 = 0, defect_h1c = 0;
    DefectWindow window;
    double mass_drift = 0, l2mass_drift = 0, energy_drift = 0; // relative
    std::vector<TrackPoint> trajectory;
};

CollisionReport collide(const CollideConfig& cfg);

// Raw little-endian samples + JSON sidecar (n, L_dom, x_left, t, p, c, version).
void write_checkpoint(const Field& f, double c, const std::string& path_base);
Field read_checkpoint(const std::string& path_base, double* c_out = nullptr);

} // namespace pde
} // namespace gkdv
