#include "slegf/greens.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

namespace slegf {

RhoTriple case_rhos(CaseId c) {
    switch (c) {
    case CaseId::j1:
    case CaseId::j2:
        return {0.0, 2.0, 2.0};
    case CaseId::j3:
        return {0.0, 2.0, 0.0};
    }
    throw std::invalid_argument("case_rhos: bad case");
}

Exponents exponents(Kappa kappa) {
    const double k = kappa.value;
    Exponents e;
    e.alpha1 = e.alpha2 = 2.0 * (12.0 / k - 1.0);
    e.alpha3 = 12.0 / k - 1.0;
    e.beta1p = e.beta2p = 5.0 / 6.0;
    e.beta3p = 4.0 / 5.0;
    return e;
}

double case_alpha(CaseId c, Kappa kappa) {
    const Exponents e = exponents(kappa);
    return c == CaseId::j3 ? e.alpha3 : e.alpha1;
}

double case_beta_decay(CaseId c) { return c == CaseId::j3 ? 8.0 : 10.0; }

BoundaryData::BoundaryData(CaseId c, double wp, double wm, double vp, double vm)
    : cse(c), w_plus(wp), w_minus(wm), v_plus(vp), v_minus(vm) {
    if (c == CaseId::j3) {
        if (!(wm < wp && wp < vp))
            throw std::invalid_argument("BoundaryData: need w- < w+ < v+");
    } else {
        if (!(vm < wm && wm < wp && wp < vp))
            throw std::invalid_argument("BoundaryData: need v- < w- < w+ < v+");
    }
}

namespace {

std::atomic<bool> g_clamp_warned{false};

double F_of_cross(double cross, Kappa kappa) {
    if (cross < 0.0 || cross > 1.0 - 1e-15) {
        // Only reachable through caller rounding at degenerate configurations.
        if (!g_clamp_warned.exchange(true))
            std::cerr << "slegf: greens cross-ratio clamped into [0, 1-1e-15]\n";
        cross = cross < 0.0 ? 0.0 : 1.0 - 1e-15;
    }
    return hyp2f1_F(kappa, cross);
}

} // namespace

double g1(const BoundaryData& d, Kappa kappa) {
    if (d.cse != CaseId::j1) throw std::invalid_argument("g1: case mismatch");
    const double k = kappa.value;
    const double e8 = 8.0 / k - 1.0, e4 = 4.0 / k;
    const double cross = (d.w_plus - d.w_minus) * (d.v_plus - d.v_minus) /
                         ((d.w_plus - d.v_minus) * (d.v_plus - d.w_minus));
    double v = std::pow(std::abs(d.w_plus - d.v_plus), e8) *
               std::pow(std::abs(d.w_plus - d.v_minus), e4) *
               std::pow(std::abs(d.w_minus - d.v_minus), e8) *
               std::pow(std::abs(d.w_minus - d.v_plus), e4);
    return v / F_of_cross(cross, kappa);
}

double g2(const BoundaryData& d, Kappa kappa) {
    if (d.cse != CaseId::j2) throw std::invalid_argument("g2: case mismatch");
    const double k = kappa.value;
    const double e8 = 8.0 / k - 1.0, e4 = 4.0 / k;
    const double cross = (d.v_plus - d.w_plus) * (d.w_minus - d.v_minus) /
                         ((d.w_plus - d.v_minus) * (d.v_plus - d.w_minus));
    double v = std::pow(std::abs(d.w_plus - d.w_minus), e8) *
               std::pow(std::abs(d.v_plus - d.v_minus), e8) *
               std::pow(std::abs(d.w_plus - d.v_minus), e4) *
               std::pow(std::abs(d.w_minus - d.v_plus), e4);
    return v / F_of_cross(cross, kappa);
}

double g3(const BoundaryData& d, Kappa kappa) {
    if (d.cse != CaseId::j3) throw std::invalid_argument("g3: case mismatch");
    const double k = kappa.value;
    const double e8 = 8.0 / k - 1.0, e4 = 4.0 / k;
    const double cross = (d.v_plus - d.w_plus) / (d.v_plus - d.w_minus);
    return std::pow(std::abs(d.w_plus - d.w_minus), e8) *
           std::pow(std::abs(d.v_plus - d.w_minus), e4) / F_of_cross(cross, kappa);
}

double g_eval(const BoundaryData& d, Kappa kappa) {
    switch (d.cse) {
    case CaseId::j1:
        return g1(d, kappa);
    case CaseId::j2:
        return g2(d, kappa);
    case CaseId::j3:
        return g3(d, kappa);
    }
    throw std::invalid_argument("g_eval: bad case");
}

double g_star(CaseId c, double r_plus, double r_minus, Kappa kappa) {
    if (!(r_plus >= 0.0 && r_plus <= 1.0 && r_minus >= 0.0 && r_minus <= 1.0))
        throw std::invalid_argument("g_star: (r+, r-) must lie in [0,1]^2");
    const double k = kappa.value;
    const double e8 = 8.0 / k - 1.0, e4 = 4.0 / k;
    // Configuration (w+, w-; v+, v-) = (r+, -r-; 1, -1); case 3 drops v-.
    switch (c) {
    case CaseId::j1: {
        if (r_plus >= 1.0 || r_minus >= 1.0) return 0.0; // vanishing |w_s - v_s| factor
        const double cross = 2.0 * (r_plus + r_minus) / ((1.0 + r_plus) * (1.0 + r_minus));
        return std::pow(1.0 - r_plus, e8) * std::pow(1.0 + r_plus, e4) *
               std::pow(1.0 - r_minus, e8) * std::pow(1.0 + r_minus, e4) /
               F_of_cross(cross, kappa);
    }
    case CaseId::j2: {
        if (r_plus + r_minus <= 0.0) return 0.0;
        const double cross = (1.0 - r_plus) * (1.0 - r_minus) / ((1.0 + r_plus) * (1.0 + r_minus));
        return std::pow(r_plus + r_minus, e8) * std::pow(2.0, e8) *
               std::pow(1.0 + r_plus, e4) * std::pow(1.0 + r_minus, e4) /
               F_of_cross(cross, kappa);
    }
    case CaseId::j3: {
        if (r_plus + r_minus <= 0.0) return 0.0;
        const double cross = (1.0 - r_plus) / (1.0 + r_minus);
        return std::pow(r_plus + r_minus, e8) * std::pow(1.0 + r_minus, e4) /
               F_of_cross(cross, kappa);
    }
    }
    throw std::invalid_argument("g_star: bad case");
}

double boundary_green_halfplane(CaseId c, const BoundaryPoint& z0, double w_plus, double w_minus,
                                double v_plus, double v_minus, Kappa kappa) {
    double wp = w_plus, wm = w_minus, vp = v_plus, vm = v_minus;
    if (!z0.at_infinity) {
        auto mob = [&](double e) {
            if (e == z0.x)
                throw std::invalid_argument("boundary_green_halfplane: z0 hits an endpoint");
            return -1.0 / (e - z0.x);
        };
        wp = mob(w_plus);
        wm = mob(w_minus);
        vp = mob(v_plus);
        vm = (c == CaseId::j3) ? 0.0 : mob(v_minus);
        // With f(z) = -1/(z - z0), (J o f)(z) = z - z0 and the prefactor
        // |(J o f)'(z0)| equals 1, as it does for f = id at z0 = infinity.
    }
    BoundaryData d(c, wp, wm, vp, vm); // validates the image ordering
    return g_eval(d, kappa);
}

} // namespace slegf
