#include "gkdv/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>

#include <nlohmann/json.hpp>

#include "gkdv/version.hpp"

namespace gkdv {
namespace pde {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// phi-type ETDRK4 weights; contour mean for small |z| to avoid cancellation.
struct Etd {
    std::complex<double> E, E2, Q, f1, f2, f3;
};

std::complex<double> cmean(const std::function<std::complex<double>(std::complex<double>)>& f,
                           std::complex<double> z) {
    if (std::abs(z) > 2.0) return f(z);
    const int M = 64;
    std::complex<double> acc = 0.0;
    for (int j = 0; j < M; ++j) {
        double th = 2.0 * std::numbers::pi * (j + 0.5) / M;
        acc += f(z + 2.5 * std::exp(std::complex<double>(0.0, th)));
    }
    return acc / double(M);
}

Etd etd_weights(std::complex<double> z, double dt) {
    using C = std::complex<double>;
    Etd w;
    w.E = std::exp(z);
    w.E2 = std::exp(0.5 * z);
    w.Q = dt * cmean([](C s) { return (std::exp(0.5 * s) - 1.0) / s; }, z);
    w.f1 = dt * cmean([](C s) { return (-4.0 - s + std::exp(s) * (4.0 - 3.0 * s + s * s)) / (s * s * s); }, z);
    w.f2 = dt * cmean([](C s) { return (2.0 + s + std::exp(s) * (-2.0 + s)) / (s * s * s); }, z);
    w.f3 = dt * cmean([](C s) { return (-4.0 - 3.0 * s - s * s + std::exp(s) * (4.0 - s)) / (s * s * s); }, z);
    return w;
}

int next_pow2(double v) {
    int n = 1;
    while (n < v) n <<= 1;
    return n;
}
} // namespace

struct Field::Engine {
    int n = 0;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::vector<double> kval;       // wavenumbers of the r2c layout
    int dealias_cut = 0;            // highest kept mode index
    // ETDRK4 tables for the current dt
    double table_dt = 0.0;
    bool table_ok = false;
    std::vector<Etd> w;
    // scratch spectral vectors
    std::vector<std::complex<double>> Nu, a, b, c, Na, Nb, Nc;

    Engine(int n_, double L, int p) : n(n_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        real_buf = fftw_alloc_real(size_t(n));
        cplx_buf = fftw_alloc_complex(size_t(n / 2 + 1));
        fwd = fftw_plan_dft_r2c_1d(n, real_buf, cplx_buf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, cplx_buf, real_buf, FFTW_ESTIMATE);
        kval.resize(size_t(n / 2 + 1));
        for (int j = 0; j <= n / 2; ++j) kval[size_t(j)] = 2.0 * std::numbers::pi * j / L;
        dealias_cut = int(std::floor((n / 2) * 2.0 / (p + 1)));
    }
    ~Engine() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (real_buf) fftw_free(real_buf);
        if (cplx_buf) fftw_free(cplx_buf);
    }
};

Field::Field(int p, double x_left, double domain_length, int n)
    : p_(p), n_(n), x_left_(x_left), L_(domain_length) {
    if (n < 16 || (n & (n - 1)) != 0) throw Error("Field size must be a power of two >= 16");
    uhat_.assign(size_t(n / 2 + 1), 0.0);
    cache_.assign(size_t(n), 0.0);
    cache_ok_ = true;
    eng_ = std::make_unique<Engine>(n, L_, p_);
}

Field::~Field() = default;
Field::Field(Field&&) noexcept = default;
Field& Field::operator=(Field&&) noexcept = default;

Field Field::clone() const {
    Field f(p_, x_left_, L_, n_);
    f.uhat_ = uhat_;
    f.t_ = t_;
    f.blow_limit = blow_limit;
    f.cache_ok_ = false;
    return f;
}

void Field::set_samples(const std::vector<double>& u) {
    if (int(u.size()) != n_) throw GridMismatch("sample count does not match field size");
    for (int i = 0; i < n_; ++i) eng_->real_buf[i] = u[size_t(i)];
    fftw_execute(eng_->fwd);
    const double inv = 1.0 / n_;
    for (int j = 0; j <= n_ / 2; ++j)
        uhat_[size_t(j)] = std::complex<double>(eng_->cplx_buf[j][0], eng_->cplx_buf[j][1]) * inv;
    for (int j = eng_->dealias_cut + 1; j <= n_ / 2; ++j) uhat_[size_t(j)] = 0.0;
    cache_ok_ = false;
}

const std::vector<double>& Field::samples() const {
    if (!cache_ok_) {
        for (int j = 0; j <= n_ / 2; ++j) {
            eng_->cplx_buf[j][0] = uhat_[size_t(j)].real();
            eng_->cplx_buf[j][1] = uhat_[size_t(j)].imag();
        }
        fftw_execute(eng_->bwd);
        for (int i = 0; i < n_; ++i) cache_[size_t(i)] = eng_->real_buf[i];
        cache_ok_ = true;
    }
    return cache_;
}

void Field::nonlinear(const std::vector<std::complex<double>>& in,
                      std::vector<std::complex<double>>& out) const {
    // N(u) = -ik * fft(u^p), dealiased
    for (int j = 0; j <= n_ / 2; ++j) {
        eng_->cplx_buf[j][0] = in[size_t(j)].real();
        eng_->cplx_buf[j][1] = in[size_t(j)].imag();
    }
    fftw_execute(eng_->bwd);
    double m = 0.0;
    for (int i = 0; i < n_; ++i) {
        double u = eng_->real_buf[i];
        m = std::max(m, std::abs(u));
        double u2 = u * u;
        eng_->real_buf[i] = (p_ == 2) ? u2 : u2 * u2;
    }
    if (m > blow_limit) throw BlowupDetected("amplitude " + std::to_string(m) + " exceeds limit");
    fftw_execute(eng_->fwd);
    const double inv = 1.0 / n_;
    out.resize(size_t(n_ / 2 + 1));
    for (int j = 0; j <= n_ / 2; ++j) {
        std::complex<double> w(eng_->cplx_buf[j][0], eng_->cplx_buf[j][1]);
        out[size_t(j)] = std::complex<double>(0.0, -eng_->kval[size_t(j)]) * (w * inv);
    }
    for (int j = eng_->dealias_cut + 1; j <= n_ / 2; ++j) out[size_t(j)] = 0.0;
}

void Field::ensure_tables(double dt) {
    if (eng_->table_ok && eng_->table_dt == dt) return;
    eng_->w.resize(size_t(n_ / 2 + 1));
    for (int j = 0; j <= n_ / 2; ++j) {
        std::complex<double> Lk(0.0, std::pow(eng_->kval[size_t(j)], 3));
        eng_->w[size_t(j)] = etd_weights(dt * Lk, dt);
    }
    eng_->table_dt = dt;
    eng_->table_ok = true;
}

void Field::step(double dt) {
    ensure_tables(dt);
    auto& S = *eng_;
    const int m = n_ / 2 + 1;
    nonlinear(uhat_, S.Nu);
    S.a.resize(size_t(m));
    for (int j = 0; j < m; ++j) S.a[size_t(j)] = S.w[size_t(j)].E2 * uhat_[size_t(j)] + S.w[size_t(j)].Q * S.Nu[size_t(j)];
    nonlinear(S.a, S.Na);
    S.b.resize(size_t(m));
    for (int j = 0; j < m; ++j) S.b[size_t(j)] = S.w[size_t(j)].E2 * uhat_[size_t(j)] + S.w[size_t(j)].Q * S.Na[size_t(j)];
    nonlinear(S.b, S.Nb);
    S.c.resize(size_t(m));
    for (int j = 0; j < m; ++j)
        S.c[size_t(j)] = S.w[size_t(j)].E2 * S.a[size_t(j)] + S.w[size_t(j)].Q * (2.0 * S.Nb[size_t(j)] - S.Nu[size_t(j)]);
    nonlinear(S.c, S.Nc);
    for (int j = 0; j < m; ++j) {
        const Etd& w = S.w[size_t(j)];
        uhat_[size_t(j)] = w.E * uhat_[size_t(j)] + w.f1 * S.Nu[size_t(j)] +
                           2.0 * w.f2 * (S.Na[size_t(j)] + S.Nb[size_t(j)]) + w.f3 * S.Nc[size_t(j)];
    }
    uhat_[0] = std::complex<double>(uhat_[0].real(), 0.0);
    t_ += dt;
    cache_ok_ = false;
}

void Field::reflect() {
    // u(x) -> u(x_left + x_right - x): conjugate spectrum with a phase.
    std::vector<double> u = samples();
    std::vector<double> r(u.size());
    for (int i = 0; i < n_; ++i) r[size_t(i)] = u[size_t((n_ - i) % n_)];
    set_samples(r);
}

void Field::recenter(int cells) {
    std::vector<double> u = samples();
    std::vector<double> r(u.size());
    for (int i = 0; i < n_; ++i) r[size_t(i)] = u[size_t((i + (cells % n_ + n_)) % n_)];
    x_left_ += cells * spacing();
    set_samples(r);
}

Field::Conserved Field::conserved() const {
    const std::vector<double>& u = samples();
    const double h = spacing();
    Conserved c;
    double px = 0.0, pp = 0.0;
    // u_x spectrally
    std::vector<double> ux(u.size());
    {
        for (int j = 0; j <= n_ / 2; ++j) {
            std::complex<double> d = std::complex<double>(0.0, eng_->kval[size_t(j)]) * uhat_[size_t(j)];
            eng_->cplx_buf[j][0] = d.real();
            eng_->cplx_buf[j][1] = d.imag();
        }
        if (n_ % 2 == 0) { eng_->cplx_buf[n_ / 2][0] = 0.0; eng_->cplx_buf[n_ / 2][1] = 0.0; }
        fftw_execute(eng_->bwd);
        for (int i = 0; i < n_; ++i) ux[size_t(i)] = eng_->real_buf[i];
        cache_ok_ = false; // bwd clobbered real_buf; cache_ vector itself is intact
    }
    for (int i = 0; i < n_; ++i) {
        c.mass += u[size_t(i)];
        c.l2mass += u[size_t(i)] * u[size_t(i)];
        px += ux[size_t(i)] * ux[size_t(i)];
        pp += std::pow(u[size_t(i)], p_ + 1);
    }
    c.mass *= h;
    c.l2mass *= h;
    c.energy = 0.5 * px * h - pp * h / (p_ + 1);
    return c;
}

double Field::max_abs() const {
    const std::vector<double>& u = samples();
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

double Field::boundary_amplitude(int margin_cells) const {
    const std::vector<double>& u = samples();
    double m = 0.0;
    for (int i = 0; i < margin_cells; ++i) {
        m = std::max(m, std::abs(u[size_t(i)]));
        m = std::max(m, std::abs(u[size_t(n_ - 1 - i)]));
    }
    return m;
}

Peaks find_peaks(const Field& f, double min_amp2, double min_separation) {
    const std::vector<double>& u = f.samples();
    const int n = f.size();
    const double h = f.spacing();
    struct Cand { int i; double amp; };
    std::vector<Cand> cands;
    for (int i = 0; i < n; ++i) {
        double um = u[size_t((i + n - 1) % n)], u0 = u[size_t(i)], up = u[size_t((i + 1) % n)];
        if (u0 > um && u0 >= up && u0 > min_amp2) cands.push_back({i, u0});
    }
    Peaks out;
    if (cands.empty()) return out;
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.amp > b.amp; });

    auto refine = [&](int i, double& pos, double& amp) {
        // quartic through 5 points, stationary point by Newton from the center
        double y[5];
        for (int k = -2; k <= 2; ++k) y[k + 2] = u[size_t((i + k + 2 * n) % n)];
        // coefficients in units of cell offset s in [-2,2]
        double c0 = y[2];
        double c1 = (y[0] - 8 * y[1] + 8 * y[3] - y[4]) / 12.0;
        double c2 = (-y[0] + 16 * y[1] - 30 * y[2] + 16 * y[3] - y[4]) / 24.0;
        double c3 = (-y[0] + 2 * y[1] - 2 * y[3] + y[4]) / 12.0;
        double c4 = (y[0] - 4 * y[1] + 6 * y[2] - 4 * y[3] + y[4]) / 24.0;
        double s = 0.0;
        for (int it = 0; it < 8; ++it) {
            double d1 = c1 + 2 * c2 * s + 3 * c3 * s * s + 4 * c4 * s * s * s;
            double d2 = 2 * c2 + 6 * c3 * s + 12 * c4 * s * s;
            if (d2 == 0.0) break;
            s -= d1 / d2;
            s = std::clamp(s, -2.0, 2.0);
        }
        pos = f.x(i) + s * h;
        amp = c0 + c1 * s + c2 * s * s + c3 * s * s * s + c4 * s * s * s * s;
    };

    double pos1, amp1;
    refine(cands[0].i, pos1, amp1);
    out.rho1 = pos1;
    out.amp1 = amp1;
    for (size_t k = 1; k < cands.size(); ++k) {
        double d = std::abs(f.x(cands[k].i) - pos1);
        d = std::min(d, f.domain_length() - d);
        if (d < min_separation) continue;
        double pos2, amp2;
        refine(cands[k].i, pos2, amp2);
        out.rho2 = pos2;
        out.amp2 = amp2;
        out.found_two = true;
        break;
    }
    return out;
}

double speed_from_amplitude(int p, double amp) {
    if (amp <= 0.0) return 0.0;
    return std::pow(amp / profiles::Q_max(p), p - 1);
}

double localized_mass(const Field& f, double center, double lambda) {
    const std::vector<double>& u = f.samples();
    double acc = 0.0;
    for (int i = 0; i < f.size(); ++i) {
        double psi = 2.0 / std::numbers::pi * std::atan(std::exp(-lambda * (f.x(i) - center) / 4.0));
        acc += u[size_t(i)] * u[size_t(i)] * psi;
    }
    return acc * f.spacing();
}

namespace {

struct LineFit {
    double slope = 0, intercept = 0;
    int count = 0;
};

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& x) {
    LineFit f;
    f.count = int(t.size());
    if (f.count < 2) return f;
    double st = 0, sx = 0, stt = 0, stx = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        st += t[i]; sx += x[i]; stt += t[i] * t[i]; stx += t[i] * x[i];
    }
    double n = double(t.size());
    double den = n * stt - st * st;
    f.slope = (n * stx - st * sx) / den;
    f.intercept = (sx * stt - st * stx) / den;
    return f;
}

double wrap_delta(double x, double L) {
    while (x > L / 2) x -= L;
    while (x < -L / 2) x += L;
    return x;
}

struct DefectNorms {
    double l2 = 0, dx_l2 = 0, h1c = 0;
    DefectWindow window;
};

// w = u - fitted solitons, measured behind the slow soliton and in the
// inter-soliton gap (10/sqrt(c)-wide exclusion zones around each peak).
DefectNorms defect_of(const Field& f, const Peaks& pk, double c, bool single) {
    const int p = f.exponent();
    const int n = f.size();
    const double h = f.spacing();
    const double rc = std::sqrt(c);
    const double L = f.domain_length();
    const std::vector<double>& u = f.samples();
    double cc1 = speed_from_amplitude(p, pk.amp1);
    double cc2 = single ? c : speed_from_amplitude(p, pk.amp2);
    std::vector<double> w(size_t(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double x = f.x(i);
        double d1 = wrap_delta(x - pk.rho1, L);
        double w1 = std::pow(cc1, 1.0 / (p - 1)) * profiles::Q(p, std::sqrt(cc1) * d1);
        double w2 = 0.0;
        if (!single) {
            double d2 = wrap_delta(x - pk.rho2, L);
            w2 = std::pow(cc2, 1.0 / (p - 1)) * profiles::Q(p, std::sqrt(cc2) * d2);
        }
        w[size_t(i)] = u[size_t(i)] - w1 - w2;
    }
    DefectNorms out;
    DefectWindow& win = out.window;
    win.left = f.x_left() + 30.0 * h;
    win.right = (single ? pk.rho1 : pk.rho2) - 10.0 / rc;
    win.gap_left = single ? 1.0 : pk.rho2 + 10.0 / rc;
    win.gap_right = single ? 0.0 : pk.rho1 - 10.0;
    auto inside = [&](double x) {
        if (x >= win.left && x <= win.right) return true;
        if (!single && x >= win.gap_left && x <= win.gap_right) return true;
        return false;
    };
    double sl2 = 0, sdx = 0;
    for (int i = 0; i < n; ++i) {
        if (!inside(f.x(i))) continue;
        double dx = (w[size_t((i - 2 + n) % n)] - 8 * w[size_t((i - 1 + n) % n)] +
                     8 * w[size_t((i + 1) % n)] - w[size_t((i + 2) % n)]) /
                    (12.0 * h);
        sl2 += w[size_t(i)] * w[size_t(i)];
        sdx += dx * dx;
    }
    out.l2 = std::sqrt(sl2 * h);
    out.dx_l2 = std::sqrt(sdx * h);
    out.h1c = out.dx_l2 + rc * out.l2;
    return out;
}

} // namespace

CollisionReport collide(const CollideConfig& cfg) {
    const SolitonParams& prm = cfg.prm;
    prm.validate();
    const int p = prm.p;
    const double c = prm.c;
    const double rc = std::sqrt(c);
    const double Tc = prm.Tc();

    CollisionReport rep;
    rep.p = p;
    rep.c = c;
    rep.T_c = Tc;

    const bool from_construction = cfg.source == Source::ApproxV || cfg.source == Source::VSharp;
    double T_run = cfg.T_run;
    if (T_run <= 0.0) {
        T_run = std::max(2.2 * Tc, 66.0 / (rc * (1.0 - c)));
        if (from_construction) T_run = std::max(2.2 * Tc, 40.0 / (rc * (1.0 - c)));
    }
    double L_dom = cfg.L_dom > 0 ? cfg.L_dom : 8.0 * (T_run * (1.0 - c) + 20.0 / rc);
    int n = cfg.n > 0 ? cfg.n : next_pow2(L_dom / cfg.h_target);
    double h = L_dom / n;
    double umax = profiles::Q_max(p);
    double dt = cfg.dt > 0 ? cfg.dt
                           : cfg.dt_scale * 0.45 * h * std::min(1.0, 1.0 / std::pow(umax, p - 1));
    // land sample times exactly
    int per_sample = std::max(1, int(std::ceil(cfg.sample_every / dt)));
    dt = cfg.sample_every / per_sample;
    rep.T_run = T_run;
    rep.dt = dt;
    rep.L_dom = L_dom;
    rep.n = n;

    Field f(p, -L_dom / 2.0, L_dom, n);
    std::vector<double> u0(size_t(n), 0.0);

    auto qc_profile = [&](double z) { return profiles::Qc(prm, z); };
    double t_start = -T_run;
    switch (cfg.source) {
        case Source::PureSum: {
            for (int i = 0; i < n; ++i) {
                double x = f.x(i);
                u0[size_t(i)] = profiles::Q(p, x + T_run) + qc_profile(x + c * T_run);
            }
            rep.source = "pure-sum";
            break;
        }
        case Source::SingleSoliton: {
            for (int i = 0; i < n; ++i) u0[size_t(i)] = profiles::Q(p, f.x(i) + T_run);
            rep.source = "single-soliton";
            break;
        }
        case Source::P2Explicit: {
            if (p != 2) throw WrongExponent("the explicit two-soliton source needs p = 2");
            for (int i = 0; i < n; ++i) u0[size_t(i)] = p2_two_soliton(c, -T_run, f.x(i));
            rep.source = "p2-explicit";
            break;
        }
        case Source::ApproxV:
        case Source::VSharp: {
            if (!cfg.approx) throw Error("collide: approx source requires an ApproxSolution");
            bool sharp = cfg.source == Source::VSharp;
            t_start = -Tc;
            for (int i = 0; i < n; ++i) {
                double x = f.x(i);
                u0[size_t(i)] = sharp ? cfg.approx->eval_v_sharp(-Tc, x + Tc)
                                      : cfg.approx->eval_v(-Tc, x + Tc);
            }
            rep.source = sharp ? "vsharp" : "approx-v";
            break;
        }
    }
    f.set_samples(u0);
    f.set_time(t_start);
    if (f.boundary_amplitude() > 1e-8)
        throw DomainTooSmall("initial data does not decay at the domain boundary");

    const double min_amp2 = 0.35 * std::pow(c, 1.0 / (p - 1)) * umax;
    const double min_sep = 6.0 + 3.0 / rc;
    const bool single = cfg.source == Source::SingleSoliton;

    Field::Conserved c0 = f.conserved();

    auto record = [&](const Field& fld) {
        TrackPoint tp;
        tp.t = fld.time();
        Field::Conserved cv = fld.conserved();
        tp.mass = cv.mass;
        tp.l2mass = cv.l2mass;
        tp.energy = cv.energy;
        Peaks pk = find_peaks(fld, single ? 0.35 * umax : min_amp2, single ? 1.0 : min_sep);
        if (single) {
            tp.valid = pk.amp1 > 0;
            tp.rho1 = pk.rho1;
            tp.c1 = speed_from_amplitude(p, pk.amp1);
        } else if (pk.found_two) {
            tp.valid = true;
            tp.rho1 = pk.rho1;
            tp.c1 = speed_from_amplitude(p, pk.amp1);
            tp.rho2 = pk.rho2;
            tp.c2 = speed_from_amplitude(p, pk.amp2);
        }
        if (tp.valid && tp.t > Tc) tp.defect_h1c = defect_of(fld, pk, c, single).h1c;
        rep.trajectory.push_back(tp);
        return tp;
    };

    // Backward phase for construction-seeded runs, so that the incoming
    // trajectory is measured from the dynamics rather than assumed.
    if (from_construction) {
        Field g = f.clone();
        std::vector<TrackPoint> back;
        record(g);
        back.push_back(rep.trajectory.back());
        rep.trajectory.pop_back();
        while (g.time() > -T_run + 0.5 * dt) {
            for (int s = 0; s < per_sample; ++s) g.step(-dt);
            record(g);
            back.push_back(rep.trajectory.back());
            rep.trajectory.pop_back();
        }
        std::reverse(back.begin(), back.end());
        rep.trajectory = std::move(back);
        rep.trajectory.pop_back(); // the t = -Tc point is re-recorded below
    }

    record(f);
    int recenters = 0;
    while (f.time() < T_run - 0.5 * dt) {
        for (int s = 0; s < per_sample; ++s) f.step(dt);
        TrackPoint tp = record(f);
        // keep the fast soliton away from the right edge
        if (tp.valid) {
            double edge = f.x_left() + f.domain_length();
            double dist = edge - tp.rho1;
            if (dist < 60.0) {
                if (recenters >= 1) throw DomainTooSmall("soliton reached the boundary twice");
                f.recenter(f.size() / 4);
                ++recenters;
            }
        }
    }

    Field::Conserved c1v = f.conserved();
    rep.mass_drift = std::abs(c1v.mass - c0.mass) / std::max(1e-30, std::abs(c0.mass));
    rep.l2mass_drift = std::abs(c1v.l2mass - c0.l2mass) / std::abs(c0.l2mass);
    rep.energy_drift = std::abs(c1v.energy - c0.energy) / std::max(1e-30, std::abs(c0.energy));

    // Unwrap trajectories (positions live on a periodic domain).
    auto unwrap = [&](std::function<double(const TrackPoint&)> get,
                      std::function<void(TrackPoint&, double)> set) {
        bool have = false;
        double prev = 0;
        for (TrackPoint& tp : rep.trajectory) {
            if (!tp.valid) continue;
            double v = get(tp);
            if (have) v = prev + wrap_delta(v - prev, L_dom);
            set(tp, v);
            prev = v;
            have = true;
        }
    };
    unwrap([](const TrackPoint& t) { return t.rho1; }, [](TrackPoint& t, double v) { t.rho1 = v; });
    if (!single)
        unwrap([](const TrackPoint& t) { return t.rho2; }, [](TrackPoint& t, double v) { t.rho2 = v; });

    // Asymptotic line fits outside the interaction window.
    const double buf = std::max(1.5 * Tc, 0.15 * T_run);
    std::vector<double> tpre, x1pre, x2pre, tpost, x1post, x2post;
    std::vector<double> c1pre, c2pre, c1post, c2post;
    for (const TrackPoint& tp : rep.trajectory) {
        if (!tp.valid) continue;
        if (tp.t <= -buf) {
            tpre.push_back(tp.t);
            x1pre.push_back(tp.rho1);
            x2pre.push_back(tp.rho2);
            c1pre.push_back(tp.c1);
            c2pre.push_back(tp.c2);
        } else if (tp.t >= buf) {
            tpost.push_back(tp.t);
            x1post.push_back(tp.rho1);
            x2post.push_back(tp.rho2);
            c1post.push_back(tp.c1);
            c2post.push_back(tp.c2);
        }
    }
    auto mean_tail = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        size_t k = v.size() - std::min(v.size(), std::max<size_t>(4, v.size() / 2));
        double acc = 0;
        int cnt = 0;
        for (size_t i = k; i < v.size(); ++i) { acc += v[i]; ++cnt; }
        return acc / cnt;
    };
    if (!tpre.empty() && !tpost.empty()) {
        LineFit f1a = fit_line(tpre, x1pre), f1b = fit_line(tpost, x1post);
        rep.Delta1 = f1b.intercept - f1a.intercept;
        rep.c1_minus = mean_tail(c1pre);
        rep.c1_plus = mean_tail(c1post);
        if (!single) {
            LineFit f2a = fit_line(tpre, x2pre), f2b = fit_line(tpost, x2post);
            rep.Delta2 = f2b.intercept - f2a.intercept;
            rep.c2_minus = mean_tail(c2pre);
            rep.c2_plus = mean_tail(c2post);
        }
    }

    // Final defect behind the outgoing solitons.
    {
        Peaks pk = find_peaks(f, single ? 0.35 * umax : min_amp2, single ? 1.0 : min_sep);
        DefectNorms d = defect_of(f, pk, c, single);
        rep.window = d.window;
        rep.defect_l2 = d.l2;
        rep.defect_dx_l2 = d.dx_l2;
        rep.defect_h1c = d.h1c;
    }
    return rep;
}

void write_checkpoint(const Field& f, double c, const std::string& path_base) {
    const std::vector<double>& u = f.samples();
    std::ofstream bin(path_base + ".bin", std::ios::binary);
    bin.write(reinterpret_cast<const char*>(u.data()), std::streamsize(u.size() * sizeof(double)));
    if (!bin) throw Error("cannot write checkpoint payload");
    nlohmann::json side = {{"n", f.size()},          {"L_dom", f.domain_length()},
                           {"x_left", f.x_left()},   {"t", f.time()},
                           {"p", f.exponent()},      {"c", c},
                           {"version", kVersion}};
    std::ofstream js(path_base + ".json");
    js << side.dump(2) << "\n";
    if (!js) throw Error("cannot write checkpoint sidecar");
}

Field read_checkpoint(const std::string& path_base, double* c_out) {
    std::ifstream js(path_base + ".json");
    if (!js) throw Error("missing checkpoint sidecar");
    nlohmann::json side;
    js >> side;
    int n = side.at("n").get<int>();
    Field f(side.at("p").get<int>(), side.at("x_left").get<double>(),
            side.at("L_dom").get<double>(), n);
    std::vector<double> u(size_t(n), 0.0);
    std::ifstream bin(path_base + ".bin", std::ios::binary);
    bin.read(reinterpret_cast<char*>(u.data()), std::streamsize(u.size() * sizeof(double)));
    if (!bin) throw Error("corrupt checkpoint payload");
    f.set_samples(u);
    f.set_time(side.at("t").get<double>());
    if (c_out) *c_out = side.at("c").get<double>();
    return f;
}

} // namespace pde
} // namespace gkdv
