#include "slegf/loewner.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace slegf {

namespace {

// Square root with the branch cut on the positive real axis: the result has
// nonnegative imaginary part.
inline cplx sqrt_im(cplx z) {
    cplx s = std::sqrt(z);
    return s.imag() < 0.0 ? -s : s;
}

} // namespace

void DrivingPath::validate() const {
    if (times.empty() || times.size() != values.size())
        throw std::invalid_argument("DrivingPath: times/values must have equal length >= 1");
    if (times.front() != 0.0) throw std::invalid_argument("DrivingPath: times must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("DrivingPath: times must be strictly increasing");
    if (!speed.empty()) {
        if (speed.size() + 1 != times.size())
            throw std::invalid_argument("DrivingPath: speed must have length times-1");
        for (double q : speed)
            if (!(q > 0.0)) throw std::invalid_argument("DrivingPath: speed entries must be > 0");
    }
}

double DrivingPath::total_capacity_time() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        s += (speed.empty() ? 1.0 : speed[i]) * (times[i + 1] - times[i]);
    return s;
}

LoewnerChain::LoewnerChain(std::vector<SlitStep> steps, double scale)
    : steps_(std::move(steps)), scale_(scale) {
    for (const auto& s : steps_) {
        if (!(s.dt > 0.0)) throw std::invalid_argument("LoewnerChain: step dt must be > 0");
        cap_time_ += s.dt;
    }
}

void LoewnerChain::push_step(double dt, double w) {
    if (!(dt > 0.0)) throw std::invalid_argument("LoewnerChain: step dt must be > 0");
    steps_.push_back({dt, w});
    cap_time_ += dt;
}

LoewnerChain LoewnerChain::concat(const LoewnerChain& other) const {
    std::vector<SlitStep> s = steps_;
    s.insert(s.end(), other.steps_.begin(), other.steps_.end());
    return LoewnerChain(std::move(s), scale_);
}

double slit_forward_real(double x, double w, double dt) {
    const double s = std::sqrt((x - w) * (x - w) + 4.0 * dt);
    return x >= w ? w + s : w - s;
}

cplx slit_forward(cplx z, double w, double dt) {
    if (z.imag() == 0.0) return {slit_forward_real(z.real(), w, dt), 0.0};
    const cplx d = z - w;
    cplx r = w + sqrt_im(d * d + 4.0 * dt);
    if (r.imag() < 0.0) r = {r.real(), 0.0};
    return r;
}

cplx slit_inverse(cplx z, double w, double dt) {
    if (z.imag() == 0.0) {
        const double x = z.real();
        const double u = (x - w) * (x - w) - 4.0 * dt;
        if (u <= 0.0) return {w, std::sqrt(-u)};
        return {x >= w ? w + std::sqrt(u) : w - std::sqrt(u), 0.0};
    }
    const cplx d = z - w;
    cplx r = w + sqrt_im(d * d - 4.0 * dt);
    if (r.imag() < 0.0) r = {r.real(), 0.0};
    return r;
}

cplx LoewnerChain::map_forward(cplx z) const { return map_forward(z, steps_.size()); }

cplx LoewnerChain::map_forward(cplx z, std::size_t n_steps) const {
    const double eps = 1e-6 * scale_;
    for (std::size_t k = 0; k < n_steps; ++k) {
        if (std::abs(z - cplx(steps_[k].w, 0.0)) < eps) throw SwallowedError(k);
        z = slit_forward(z, steps_[k].w, steps_[k].dt);
    }
    return z;
}

cplx LoewnerChain::map_inverse(cplx w) const { return map_inverse(w, steps_.size()); }

cplx LoewnerChain::map_inverse(cplx w, std::size_t n_steps) const {
    for (std::size_t k = n_steps; k-- > 0;)
        w = slit_inverse(w, steps_[k].w, steps_[k].dt);
    return w;
}

ChainFromPath chain_from_driving(const DrivingPath& path, double substep) {
    path.validate();
    if (!(substep > 0.0)) throw std::invalid_argument("chain_from_driving: substep must be > 0");
    if (path.times.size() < 2)
        throw std::invalid_argument("chain_from_driving: path has no interval");
    ChainFromPath out;
    out.steps_at_grid.resize(path.times.size(), 0);
    double wmin = path.values[0], wmax = path.values[0];
    for (std::size_t i = 0; i + 1 < path.times.size(); ++i) {
        const double t0 = path.times[i], t1 = path.times[i + 1];
        const double q = path.speed.empty() ? 1.0 : path.speed[i];
        const double len = t1 - t0;
        const int nsub = std::max(1, static_cast<int>(std::ceil(len / substep)));
        const double d = len / nsub;
        for (int s = 0; s < nsub; ++s) {
            const double frac = (s * d) / len;
            const double w = path.values[i] + frac * (path.values[i + 1] - path.values[i]);
            out.chain.push_step(q * d, w);
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
        }
        out.steps_at_grid[i + 1] = out.chain.size();
    }
    out.chain.set_scale(std::max({wmax - wmin, std::sqrt(out.chain.capacity_time()), DBL_MIN}));
    return out;
}

std::vector<cplx> trace_curve(const ChainFromPath& cp, const DrivingPath& path) {
    path.validate();
    if (cp.steps_at_grid.size() != path.times.size())
        throw std::invalid_argument("trace_curve: chain was not built from this path");
    std::vector<cplx> eta(path.times.size());
    for (std::size_t k = 0; k < path.times.size(); ++k)
        eta[k] = cp.chain.map_inverse(cplx(path.values[k], 0.0), cp.steps_at_grid[k]);
    return eta;
}

cplx halfdisk_map(double x0, double r, cplx z) {
    if (!(r > 0.0)) throw std::invalid_argument("halfdisk_map: r must be > 0");
    if (std::abs(z - cplx(x0, 0.0)) <= r)
        throw std::invalid_argument("halfdisk_map: z inside the closed half-disk hull");
    return z + r * r / (z - x0);
}

double advance_force_point(double vhat, const DrivingPath& path, double eps_stick) {
    path.validate();
    const int side = vhat >= path.values[0] ? 1 : -1;
    for (std::size_t i = 0; i + 1 < path.times.size(); ++i) {
        const double q = path.speed.empty() ? 1.0 : path.speed[i];
        const double w = path.values[i];
        if (side * (vhat - w) <= 0.0) vhat = w + side * eps_stick;
        const double g = vhat - w;
        vhat = w + side * std::sqrt(g * g + 4.0 * q * (path.times[i + 1] - path.times[i]));
    }
    const double wend = path.values.back();
    if (side * (vhat - wend) <= 0.0) vhat = wend + side * eps_stick;
    return vhat;
}

void save_chain_csv(const std::string& file, const LoewnerChain& chain, const ChainHeader& h) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("save_chain_csv: cannot open " + file);
    nlohmann::json j{{"kappa", h.kappa}, {"seed", h.seed}, {"substep", h.substep}};
    os << "# " << j.dump() << "\n";
    os << "dt,w\n";
    char buf[80];
    for (const auto& s : chain.steps()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.dt, s.w);
        os << buf;
    }
}

LoewnerChain load_chain_csv(const std::string& file, ChainHeader* h) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("load_chain_csv: cannot open " + file);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("load_chain_csv: missing JSON header line");
    if (h) {
        auto j = nlohmann::json::parse(line.substr(2));
        h->kappa = j.value("kappa", 0.0);
        h->seed = j.value("seed", static_cast<std::uint64_t>(0));
        h->substep = j.value("substep", 0.0);
    }
    if (!std::getline(is, line) || line != "dt,w")
        throw std::runtime_error("load_chain_csv: missing column header");
    LoewnerChain chain;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double dt, w;
        char comma;
        if (!(ls >> dt >> comma >> w))
            throw std::runtime_error("load_chain_csv: malformed row: " + line);
        chain.push_step(dt, w);
    }
    return chain;
}

} // namespace slegf
