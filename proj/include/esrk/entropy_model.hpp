#pragma once

#include <string_view>

namespace esrk {

enum class Law { Advection, Burgers };
enum class EntropyKind { Quadratic, Logarithmic };

std::string_view to_string(Law law);
std::string_view to_string(EntropyKind entropy);
Law parse_law(std::string_view text);
EntropyKind parse_entropy(std::string_view text);

/// Point values of the conservation law and entropy pair at one state.
struct EntropyBundle {
    double f;       // physical flux
    double fprime;  // df/du
    double eta;     // entropy
    double v;       // entropy variable d(eta)/du
    double phi;     // entropy flux, phi' = v f'
    double theta;   // entropy potential v f - phi
    double H;       // inverse Hessian 1 / eta''
};

/// Scalar conservation law paired with a convex entropy.
///
/// Supported pairings: advection/quadratic, burgers/quadratic and burgers/logarithmic
/// (eta = -log u, admissible for u > 0 only). The advection flux is f(u) = u; the
/// orientation of the advection experiment is applied by the space module.
///
/// The difference helpers (`d_eta`, `d_v`, `d_theta`) evaluate b-side minus a-side in
/// forms that do not lose precision when a and b are close.
class EntropyModel {
public:
    /// Throws ConfigError for a pairing other than the three above.
    EntropyModel(Law law, EntropyKind entropy);

    Law law() const noexcept { return law_; }
    EntropyKind entropy() const noexcept { return entropy_; }
    bool quadratic() const noexcept { return entropy_ == EntropyKind::Quadratic; }

    bool admissible(double u) const noexcept;
    /// Throws DomainViolation unless `admissible(u)`.
    void require_admissible(double u) const;

    EntropyBundle eval(double u) const;

    double flux(double u) const;
    double flux_prime(double u) const;
    double eta(double u) const;
    double v(double u) const;
    double phi(double u) const;
    double theta(double u) const;
    double H(double u) const;
    /// State with entropy variable v (inverse of v(u)).
    double u_of_v(double v) const;

    double d_eta(double a, double b) const;
    double d_v(double a, double b) const;
    double d_theta(double a, double b) const;

    bool operator==(const EntropyModel&) const = default;

private:
    Law law_;
    EntropyKind entropy_;
};

/// x - log(1 + x), accurate for small |x|.
double x_minus_log1p(double x);

}  // namespace esrk
