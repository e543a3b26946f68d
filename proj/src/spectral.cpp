#include "slegf/spectral.hpp"

#include <cmath>
#include <functional>

#include "slegf/quadrature.hpp"

namespace slegf {

void validate_rho_constraints(Kappa kappa, const RhoTriple& rhos) {
    const double k = kappa.value;
    const double lo = std::max(-2.0, k / 2.0 - 4.0);
    if (!(rhos.rho_plus > lo) || !(rhos.rho_minus > lo))
        throw std::invalid_argument("rho+/- must exceed max(-2, kappa/2 - 4)");
    if (!(rhos.rho0 >= k / 4.0 - 2.0))
        throw std::invalid_argument("rho0 must be >= kappa/4 - 2");
    if (!(rhos.rho0 + rhos.rho_plus >= k / 2.0 - 4.0) ||
        !(rhos.rho0 + rhos.rho_minus >= k / 2.0 - 4.0))
        throw std::invalid_argument("rho0 + rho_sigma must be >= kappa/2 - 4");
}

double Poly2::eval(double x, double y) const {
    double s = 0.0;
    for (int i = deg; i >= 0; --i) {
        double row = 0.0;
        for (int j = deg; j >= 0; --j) row = row * y + at(i, j);
        s = s * x + row;
    }
    return s;
}

namespace {

Poly2 p2_dx(const Poly2& p) {
    Poly2 q(p.deg);
    for (int i = 1; i <= p.deg; ++i)
        for (int j = 0; j <= p.deg; ++j) q.at(i - 1, j) = i * p.at(i, j);
    return q;
}

Poly2 p2_dy(const Poly2& p) {
    Poly2 q(p.deg);
    for (int i = 0; i <= p.deg; ++i)
        for (int j = 1; j <= p.deg; ++j) q.at(i, j - 1) = j * p.at(i, j);
    return q;
}

Poly2 p2_mul(const Poly2& a, const Poly2& b) {
    Poly2 q(a.deg + b.deg);
    for (int i = 0; i <= a.deg; ++i)
        for (int j = 0; j <= a.deg; ++j) {
            const double c = a.at(i, j);
            if (c == 0.0) continue;
            for (int k = 0; k <= b.deg; ++k)
                for (int l = 0; l <= b.deg; ++l) q.at(i + k, j + l) += c * b.at(k, l);
        }
    return q;
}

} // namespace

double Poly2::eval_dx(double x, double y) const { return p2_dx(*this).eval(x, y); }
double Poly2::eval_dy(double x, double y) const { return p2_dy(*this).eval(x, y); }
double Poly2::eval_dxx(double x, double y) const { return p2_dx(p2_dx(*this)).eval(x, y); }
double Poly2::eval_dxy(double x, double y) const { return p2_dy(p2_dx(*this)).eval(x, y); }
double Poly2::eval_dyy(double x, double y) const { return p2_dy(p2_dy(*this)).eval(x, y); }

SpectralModel::SpectralModel(Kappa kappa, RhoTriple rhos, double tolerance, double t_min)
    : kappa_(kappa.value), rhos_(rhos), tol_(tolerance), t_min_(t_min) {
    validate_rho_constraints(kappa, rhos);
    if (!(tolerance > 0.0) || !(t_min > 0.0))
        throw std::invalid_argument("SpectralModel: tolerance and t_min must be > 0");
    alpha0_ = 2.0 / kappa_ * (rhos.rho0 + 2.0) - 1.0;
    alpha_plus_ = 2.0 / kappa_ * (rhos.rho_plus + 2.0) - 1.0;
    alpha_minus_ = 2.0 / kappa_ * (rhos.rho_minus + 2.0) - 1.0;
    beta_ = alpha_plus_ + alpha_minus_ + 1.0;

    constexpr int kCap = 60;
    constexpr int kMax = 120;
    // Per-degree tail terms S_k e^{(kappa/2) lambda_k t}, from the sup-norm
    // and norm formulas.
    auto degree_term = [&](int k, double t) {
        double s = 0.0;
        for (int n = 0; n <= k; ++n) {
            const int m = k - n;
            const double sup = jacobi_sup_bound(JacobiParams(alpha0_, beta_ + 2.0 * n, m)) *
                               jacobi_sup_bound(JacobiParams(alpha_plus_, alpha_minus_, n));
            const double nrm = std::pow(2.0, -(alpha0_ + beta_ + 2.0 * n + 1.0)) *
                               jacobi_norm_sq(JacobiParams(alpha0_, beta_ + 2.0 * n, m)) *
                               jacobi_norm_sq(JacobiParams(alpha_plus_, alpha_minus_, n));
            s += sup * sup / nrm;
        }
        return s * std::exp(0.5 * kappa_ * lambda(k) * t);
    };
    auto tail = [&](int N, double t) {
        double s = 0.0;
        for (int k = N + 1; k <= kMax; ++k) s += degree_term(k, t);
        return s;
    };
    int N = -1;
    for (int cand = 1; cand <= kCap; ++cand) {
        if (tail(cand, t_min_) < tol_) {
            N = cand;
            break;
        }
    }
    if (N < 0) {
        double lo = t_min_, hi = 10.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (tail(kCap, mid) < tol_ ? hi : lo) = mid;
        }
        throw std::invalid_argument(
            "SpectralModel: truncation cap N=60 cannot reach the tolerance at this t_min; "
            "smallest usable t_min is about " +
            std::to_string(hi));
    }
    N_ = N;
    norm_table_.resize(tri_index(N_, 0) + 1);
    for (int n = 0; n <= N_; ++n)
        for (int m = 0; m + n <= N_; ++m) {
            norm_table_[tri_index(n, m)] =
                std::pow(2.0, -(alpha0_ + beta_ + 2.0 * n + 1.0)) *
                jacobi_norm_sq(JacobiParams(alpha0_, beta_ + 2.0 * n, m)) *
                jacobi_norm_sq(JacobiParams(alpha_plus_, alpha_minus_, n));
        }
}

std::size_t SpectralModel::tri_index(int n, int m) const {
    return static_cast<std::size_t>(n) * (N_ + 1) - static_cast<std::size_t>(n) * (n - 1) / 2 + m;
}

double SpectralModel::weight_psi(double x, double y) const {
    if (!TriangleDomain::contains(x, y)) return 0.0;
    return std::pow(y - x, alpha_plus_) * std::pow(y + x, alpha_minus_) *
           std::pow(1.0 - y, alpha0_);
}

double SpectralModel::eval_vnm(int n, int m, double x, double y) const {
    if (n < 0 || m < 0 || n + m > N_)
        throw std::invalid_argument("eval_vnm: need 0 <= n+m <= N");
    // Q_n by the homogenized three-term recurrence (no division by y).
    const double a = alpha_plus_, b = alpha_minus_;
    double qm1 = 1.0, qc = 1.0;
    if (n >= 1) qc = 0.5 * ((a + b + 2.0) * x + (a - b) * y);
    for (int j = 2; j <= n; ++j) {
        const double j2 = 2.0 * j + a + b;
        const double c1 = 2.0 * j * (j + a + b) * (j2 - 2.0);
        const double qn = ((j2 - 1.0) * (j2 * (j2 - 2.0) * x + (a * a - b * b) * y) * qc -
                           2.0 * (j + a - 1.0) * (j + b - 1.0) * j2 * y * y * qm1) /
                          c1;
        qm1 = qc;
        qc = qn;
    }
    const double q = qc;
    return q * jacobi_eval(JacobiParams(alpha0_, beta_ + 2.0 * n, m), 2.0 * y - 1.0);
}

double SpectralModel::vnm_norm_sq(int n, int m) const {
    if (n < 0 || m < 0 || n + m > N_)
        throw std::invalid_argument("vnm_norm_sq: need 0 <= n+m <= N");
    return norm_table_[tri_index(n, m)];
}

std::vector<double> SpectralModel::basis_at(double x, double y) const {
    std::vector<double> out(norm_table_.size());
    const double a = alpha_plus_, b = alpha_minus_;
    double qm1 = 0.0, qc = 1.0;
    for (int n = 0; n <= N_; ++n) {
        if (n == 1) {
            qm1 = qc;
            qc = 0.5 * ((a + b + 2.0) * x + (a - b) * y);
        } else if (n >= 2) {
            const double n2 = 2.0 * n + a + b;
            const double c1 = 2.0 * n * (n + a + b) * (n2 - 2.0);
            const double qn = ((n2 - 1.0) * (n2 * (n2 - 2.0) * x + (a * a - b * b) * y) * qc -
                               2.0 * (n + a - 1.0) * (n + b - 1.0) * n2 * y * y * qm1) /
                              c1;
            qm1 = qc;
            qc = qn;
        }
        // P_m^{(alpha0, beta+2n)}(2y-1) recurrence in m
        const double a0 = alpha0_, b0 = beta_ + 2.0 * n;
        const double u = 2.0 * y - 1.0;
        double pm1 = 0.0, pc = 1.0;
        const std::size_t base = tri_index(n, 0);
        for (int m = 0; m + n <= N_; ++m) {
            if (m == 1) {
                pm1 = pc;
                pc = 0.5 * ((a0 + b0 + 2.0) * u + (a0 - b0));
            } else if (m >= 2) {
                const double m2 = 2.0 * m + a0 + b0;
                const double c1 = 2.0 * m * (m + a0 + b0) * (m2 - 2.0);
                const double pn = ((m2 - 1.0) * (m2 * (m2 - 2.0) * u + a0 * a0 - b0 * b0) * pc -
                                   2.0 * (m + a0 - 1.0) * (m + b0 - 1.0) * m2 * pm1) /
                                  c1;
                pm1 = pc;
                pc = pn;
            }
            out[base + m] = qc * pc;
        }
    }
    return out;
}

double SpectralModel::series_sum(double t, const std::vector<double>& basis_xy, double xs,
                                 double ys) const {
    const std::vector<double> bs = basis_at(xs, ys);
    double total = 0.0;
    for (int k = 0; k <= N_; ++k) {
        double sk = 0.0;
        for (int n = 0; n <= k; ++n) {
            const std::size_t i = tri_index(n, k - n);
            sk += basis_xy[i] * bs[i] / norm_table_[i];
        }
        total += sk * std::exp(0.5 * kappa_ * lambda(k) * t);
    }
    return total;
}

double SpectralModel::transition_density_xy(double t, double x, double y, double xs,
                                            double ys) const {
    if (!(t >= t_min_ - 1e-12))
        throw std::invalid_argument("transition_density_xy: t below the model's t_min");
    if (!TriangleDomain::contains_closed(x, y))
        throw std::invalid_argument("transition_density_xy: (x,y) outside the closed triangle");
    const double psi = weight_psi(xs, ys);
    if (psi == 0.0) return 0.0;
    return psi * series_sum(t, basis_at(x, y), xs, ys);
}

double SpectralModel::invariant_density_xy(double xs, double ys) const {
    return weight_psi(xs, ys) / norm_table_[0];
}

void SpectralModel::check_point_R(double rp, double rm) const {
    if (!(rp >= 0.0 && rp <= 1.0 && rm >= 0.0 && rm <= 1.0))
        throw std::invalid_argument("point (r+, r-) must lie in [0,1]^2");
}

double SpectralModel::transition_density_R(double t, double rp, double rm, double rps,
                                           double rms) const {
    check_point_R(rp, rm);
    check_point_R(rps, rms);
    const XY a = xy_from_r(rp, rm), b = xy_from_r(rps, rms);
    return transition_density_xy(t, a.x, a.y, b.x, b.y) * (rps + rms);
}

double SpectralModel::invariant_density_R(double rps, double rms) const {
    check_point_R(rps, rms);
    const XY b = xy_from_r(rps, rms);
    return invariant_density_xy(b.x, b.y) * (rps + rms);
}

double SpectralModel::apply_generator(const Poly2& p, double x, double y) const {
    const double S = rhos_.rho_plus + rhos_.rho_minus + rhos_.rho0 + 6.0;
    return 0.5 * kappa_ * (y - x * x) * p.eval_dxx(x, y) +
           kappa_ * x * (1.0 - y) * p.eval_dxy(x, y) +
           0.5 * kappa_ * y * (1.0 - y) * p.eval_dyy(x, y) -
           (S * x + (rhos_.rho_plus - rhos_.rho_minus)) * p.eval_dx(x, y) -
           (S * y - (rhos_.rho_plus + rhos_.rho_minus + 4.0)) * p.eval_dy(x, y);
}

Poly2 SpectralModel::vnm_poly(int n, int m) const {
    if (n < 0 || m < 0 || n + m > N_)
        throw std::invalid_argument("vnm_poly: need 0 <= n+m <= N");
    // Q_n coefficients via the homogenized recurrence.
    const double a = alpha_plus_, b = alpha_minus_;
    Poly2 qm1(0), qc(0);
    qm1.at(0, 0) = 1.0;
    qc.at(0, 0) = 1.0;
    if (n >= 1) {
        Poly2 q1(1);
        q1.at(1, 0) = 0.5 * (a + b + 2.0);
        q1.at(0, 1) = 0.5 * (a - b);
        qm1 = qc;
        qc = q1;
    }
    for (int j = 2; j <= n; ++j) {
        const double j2 = 2.0 * j + a + b;
        const double c1 = 2.0 * j * (j + a + b) * (j2 - 2.0);
        Poly2 lin(1);
        lin.at(1, 0) = (j2 - 1.0) * j2 * (j2 - 2.0) / c1;
        lin.at(0, 1) = (j2 - 1.0) * (a * a - b * b) / c1;
        Poly2 y2(2);
        y2.at(0, 2) = -2.0 * (j + a - 1.0) * (j + b - 1.0) * j2 / c1;
        Poly2 qn = p2_mul(lin, qc);
        Poly2 tail = p2_mul(y2, qm1);
        Poly2 sum(std::max(qn.deg, tail.deg));
        for (int i = 0; i <= sum.deg; ++i)
            for (int jj = 0; jj <= sum.deg; ++jj) {
                double v = 0.0;
                if (i <= qn.deg && jj <= qn.deg) v += qn.at(i, jj);
                if (i <= tail.deg && jj <= tail.deg) v += tail.at(i, jj);
                sum.at(i, jj) = v;
            }
        qm1 = qc;
        qc = sum;
    }
    // P_m^{(alpha0, beta+2n)}(2y - 1) as a polynomial in y.
    const double a0 = alpha0_, b0 = beta_ + 2.0 * n;
    std::vector<double> tm1{1.0}, tc{1.0};
    if (m >= 1) {
        tm1 = tc;
        tc = {-(b0 + 1.0), a0 + b0 + 2.0};
    }
    for (int j = 2; j <= m; ++j) {
        const double j2 = 2.0 * j + a0 + b0;
        const double c1 = 2.0 * j * (j + a0 + b0) * (j2 - 2.0);
        const double A = (j2 - 1.0) * j2 * (j2 - 2.0) * 2.0 / c1;           // times y
        const double B = (j2 - 1.0) * (a0 * a0 - b0 * b0 - j2 * (j2 - 2.0)) / c1; // constant
        const double C = 2.0 * (j + a0 - 1.0) * (j + b0 - 1.0) * j2 / c1;
        std::vector<double> tn(j + 1, 0.0);
        for (std::size_t i = 0; i < tc.size(); ++i) {
            tn[i + 1] += A * tc[i];
            tn[i] += B * tc[i];
        }
        for (std::size_t i = 0; i < tm1.size(); ++i) tn[i] -= C * tm1[i];
        tm1 = tc;
        tc = tn;
    }
    Poly2 ty(static_cast<int>(tc.size()) - 1);
    for (std::size_t j = 0; j < tc.size(); ++j) ty.at(0, static_cast<int>(j)) = tc[j];
    return p2_mul(ty, qc);
}

double SpectralModel::integrate_psi(const std::function<double(double, double)>& f) const {
    const int nq = N_ + 6;
    const Quad1D qr = gauss_jacobi(nq, alpha_plus_, alpha_minus_);
    const Quad1D qh = gauss_jacobi01(nq, alpha0_, beta_);
    double s = 0.0;
    for (int i = 0; i < nq; ++i)
        for (int j = 0; j < nq; ++j) {
            const double h = qh.x[j];
            s += qr.w[i] * qh.w[j] * f(qr.x[i] * h, h);
        }
    return s;
}

SpectralModel build_model(Kappa kappa, RhoTriple rhos, double tolerance, double t_min) {
    return SpectralModel(kappa, rhos, tolerance, t_min);
}

XY xy_from_r(double rp, double rm) { return {rp - rm, 1.0 - rp * rm}; }

void r_from_xy(double x, double y, double* rp, double* rm) {
    const double disc = x * x + 4.0 * (1.0 - y);
    if (disc < -1e-12) throw std::invalid_argument("r_from_xy: negative discriminant");
    const double s = std::sqrt(std::max(0.0, disc));
    double a = 0.5 * (s + x), b = 0.5 * (s - x);
    const double tol = 1e-10;
    if (a < -tol || a > 1.0 + tol || b < -tol || b > 1.0 + tol)
        throw std::invalid_argument("r_from_xy: root pair leaves [0,1]^2");
    *rp = std::min(1.0, std::max(0.0, a));
    *rm = std::min(1.0, std::max(0.0, b));
}

TiltedModel::TiltedModel(CaseId c, Kappa kappa, double tolerance, double t_min)
    : case_(c), kappa_(kappa), alpha_(case_alpha(c, kappa)),
      model_(kappa, case_rhos(c), tolerance, t_min) {
    const Quad1D q = tanh_sinh01(5);
    const double norm00 = model_.vnm_norm_sq(0, 0);
    double z = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < q.x.size(); ++j)
            row += q.w[j] * tilt_base(q.x[i], q.x[j]);
        z += q.w[i] * row;
    }
    Z_ = z / norm00;
    if (!(Z_ > 0.0) || !std::isfinite(Z_))
        throw std::runtime_error("TiltedModel: partition function failed to converge");
}

double TiltedModel::tilt_base(double rp, double rm) const {
    const double k = kappa_.value;
    const double e4 = 4.0 / k - 1.0, e8 = 8.0 / k - 1.0;
    switch (case_) {
    case CaseId::j1: {
        const double cross = 2.0 * (rp + rm) / ((1.0 + rp) * (1.0 + rm));
        return std::pow(rp * rm, e4) * std::pow((1.0 + rp) * (1.0 + rm), e4) * (rp + rm) *
               hyp2f1_F(kappa_, cross);
    }
    case CaseId::j2: {
        const double cross = (1.0 - rp) * (1.0 - rm) / ((1.0 + rp) * (1.0 + rm));
        return std::pow(rp * rm, e4) * std::pow((1.0 - rp) * (1.0 - rm), e8) *
               std::pow((1.0 + rp) * (1.0 + rm), e4) * std::pow(rp + rm, 1.0 - e8) *
               std::pow(2.0, -e8) * hyp2f1_F(kappa_, cross);
    }
    case CaseId::j3: {
        const double cross = (1.0 - rp) / (1.0 + rm);
        return std::pow(rp * rm, e4) * std::pow(1.0 - rp, e8) * std::pow(1.0 - rm, e4) *
               std::pow((1.0 + rp) * (1.0 + rm), e4) * std::pow(rp + rm, 1.0 - e8) *
               hyp2f1_F(kappa_, cross);
    }
    }
    throw std::invalid_argument("tilt_base: bad case");
}

double TiltedModel::quasi_invariant_density(double rp, double rm) const {
    return tilt_base(rp, rm) / (model_.vnm_norm_sq(0, 0) * Z_);
}

double TiltedModel::tilted_transition(double t, double rp, double rm, double rps,
                                      double rms) const {
    const double gs = g_star(case_, rps, rms, kappa_);
    if (gs <= 0.0)
        throw std::invalid_argument("tilted_transition: G_j^* vanishes at the target point");
    return std::exp(-2.0 * alpha_ * t) * model_.transition_density_R(t, rp, rm, rps, rms) *
           g_star(case_, rp, rm, kappa_) / gs;
}

double TiltedModel::survival_probability(double t, double rp, double rm) const {
    if (!(t >= model_.t_min() - 1e-12))
        throw std::invalid_argument("survival_probability: t below the model's t_min");
    const Quad1D q = tanh_sinh01(4);
    const XY a = xy_from_r(rp, rm);
    const std::vector<double> basis_r = model_.basis_at(a.x, a.y);
    double s = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < q.x.size(); ++j) {
            const XY b = xy_from_r(q.x[i], q.x[j]);
            row += q.w[j] * tilt_base(q.x[i], q.x[j]) * model_.series_sum(t, basis_r, b.x, b.y);
        }
        s += q.w[i] * row;
    }
    s *= std::exp(-2.0 * alpha_ * t) * g_star(case_, rp, rm, kappa_);
    return std::min(1.0, std::max(0.0, s));
}

double TiltedModel::survival_asymptotic(double t, double rp, double rm) const {
    return Z_ * g_star(case_, rp, rm, kappa_) * std::exp(-2.0 * alpha_ * t);
}

} // namespace slegf
