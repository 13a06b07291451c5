#include "esrk/entropy_model.hpp"

#include <cmath>
#include <string>

#include "esrk/error.hpp"

namespace esrk {

std::string_view to_string(Law law) {
    return law == Law::Advection ? "advection" : "burgers";
}

std::string_view to_string(EntropyKind entropy) {
    return entropy == EntropyKind::Quadratic ? "quadratic" : "logarithmic";
}

Law parse_law(std::string_view text) {
    if (text == "advection") return Law::Advection;
    if (text == "burgers") return Law::Burgers;
    throw ConfigError("unknown law: " + std::string(text));
}

EntropyKind parse_entropy(std::string_view text) {
    if (text == "quadratic") return EntropyKind::Quadratic;
    if (text == "logarithmic" || text == "log") return EntropyKind::Logarithmic;
    throw ConfigError("unknown entropy: " + std::string(text));
}

double x_minus_log1p(double x) {
    if (std::abs(x) < 0.5) {
        // log1p(x) = 2 atanh(t), t = x/(2+x), so x - log1p(x) = x^2/(2+x) - 2(t^3/3 + t^5/5 + ...).
        // The leading term carries no cancellation and the tail is at most x/6 of it.
        const double t = x / (2.0 + x), t2 = t * t;
        double power = t * t2, tail = 0.0;
        for (int k = 3; k < 60; k += 2) {
            const double term = power / k;
            tail += term;
            if (std::abs(term) <= 1e-18 * std::abs(tail)) break;
            power *= t2;
        }
        return x * x / (2.0 + x) - 2.0 * tail;
    }
    return x - std::log1p(x);
}

EntropyModel::EntropyModel(Law law, EntropyKind entropy) : law_(law), entropy_(entropy) {
    if (law == Law::Advection && entropy == EntropyKind::Logarithmic)
        throw ConfigError("the logarithmic entropy is only paired with burgers");
}

bool EntropyModel::admissible(double u) const noexcept {
    if (!std::isfinite(u)) return false;
    return quadratic() || u > 0.0;
}

void EntropyModel::require_admissible(double u) const {
    if (!admissible(u)) throw DomainViolation("state outside the admissible domain", u);
}

double EntropyModel::flux(double u) const {
    return law_ == Law::Advection ? u : 0.5 * u * u;
}

double EntropyModel::flux_prime(double u) const {
    return law_ == Law::Advection ? 1.0 : u;
}

double EntropyModel::eta(double u) const {
    require_admissible(u);
    return quadratic() ? 0.5 * u * u : -std::log(u);
}

double EntropyModel::v(double u) const {
    require_admissible(u);
    return quadratic() ? u : -1.0 / u;
}

double EntropyModel::phi(double u) const {
    require_admissible(u);
    if (law_ == Law::Advection) return 0.5 * u * u;
    return quadratic() ? u * u * u / 3.0 : -u;
}

double EntropyModel::theta(double u) const {
    require_admissible(u);
    if (law_ == Law::Advection) return 0.5 * u * u;
    return quadratic() ? u * u * u / 6.0 : 0.5 * u;
}

double EntropyModel::H(double u) const {
    require_admissible(u);
    return quadratic() ? 1.0 : u * u;
}

double EntropyModel::u_of_v(double v) const {
    if (quadratic()) return v;
    if (!(v < 0.0)) throw DomainViolation("entropy variable outside -1/u range", v);
    return -1.0 / v;
}

EntropyBundle EntropyModel::eval(double u) const {
    require_admissible(u);
    return {flux(u), flux_prime(u), eta(u), v(u), phi(u), theta(u), H(u)};
}

double EntropyModel::d_eta(double a, double b) const {
    require_admissible(a);
    require_admissible(b);
    if (quadratic()) return 0.5 * (b - a) * (b + a);
    return -std::log1p((b - a) / a);
}

double EntropyModel::d_v(double a, double b) const {
    require_admissible(a);
    require_admissible(b);
    return quadratic() ? b - a : (b - a) / (a * b);
}

double EntropyModel::d_theta(double a, double b) const {
    require_admissible(a);
    require_admissible(b);
    if (law_ == Law::Advection) return 0.5 * (b - a) * (b + a);
    if (quadratic()) return (b - a) * (b * b + a * b + a * a) / 6.0;
    return 0.5 * (b - a);
}

}  // namespace esrk
