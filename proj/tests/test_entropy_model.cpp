#include <cmath>
#include <random>

#include <doctest.h>

#include "esrk/entropy_model.hpp"
#include "esrk/error.hpp"

using namespace esrk;

namespace {

const EntropyModel kBurgersQuad(Law::Burgers, EntropyKind::Quadratic);
const EntropyModel kBurgersLog(Law::Burgers, EntropyKind::Logarithmic);
const EntropyModel kAdvection(Law::Advection, EntropyKind::Quadratic);

std::vector<double> samples(const EntropyModel& m) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(m.quadratic() ? -3.0 : 0.1, 3.0);
    std::vector<double> out;
    for (int i = 0; i < 200; ++i) out.push_back(d(rng));
    return out;
}

}  // namespace

TEST_CASE("closed-form bundles") {
    const auto q = kBurgersQuad.eval(1.0);
    CHECK(q.eta == doctest::Approx(0.5));
    CHECK(q.v == doctest::Approx(1.0));
    CHECK(q.phi == doctest::Approx(1.0 / 3));
    CHECK(q.theta == doctest::Approx(1.0 / 6));
    CHECK(q.H == 1.0);

    const auto l = kBurgersLog.eval(1.0);
    CHECK(l.eta == doctest::Approx(0.0));
    CHECK(l.v == doctest::Approx(-1.0));
    CHECK(l.phi == doctest::Approx(-1.0));
    CHECK(l.theta == doctest::Approx(0.5));
    CHECK(l.H == doctest::Approx(1.0));

    const auto a = kAdvection.eval(2.0);
    CHECK(a.f == 2.0);
    CHECK(a.fprime == 1.0);
    CHECK(a.v == 2.0);
}

TEST_CASE("logarithmic entropy rejects non-positive states") {
    CHECK_THROWS_AS(kBurgersLog.eval(-0.5), DomainViolation);
    CHECK_THROWS_AS(kBurgersLog.eta(0.0), DomainViolation);
    CHECK_FALSE(kBurgersLog.admissible(0.0));
    CHECK(kBurgersQuad.admissible(-5.0));
}

TEST_CASE("advection is only paired with the quadratic entropy") {
    CHECK_THROWS_AS(EntropyModel(Law::Advection, EntropyKind::Logarithmic), ConfigError);
}

TEST_CASE("names round-trip") {
    CHECK(parse_law(to_string(Law::Burgers)) == Law::Burgers);
    CHECK(parse_entropy(to_string(EntropyKind::Logarithmic)) == EntropyKind::Logarithmic);
    CHECK(parse_entropy("log") == EntropyKind::Logarithmic);
    CHECK_THROWS_AS(parse_law("euler"), ConfigError);
}

TEST_CASE("entropy flux compatibility phi' = v f'") {
    for (const auto* m : {&kBurgersQuad, &kBurgersLog, &kAdvection}) {
        for (double u : samples(*m)) {
            const double h = 1e-5 * std::max(1.0, std::abs(u));
            const double fd = (m->phi(u + h) - m->phi(u - h)) / (2 * h);
            CHECK(std::abs(fd - m->v(u) * m->flux_prime(u)) <= 1e-8 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("entropy potential identities") {
    for (const auto* m : {&kBurgersQuad, &kBurgersLog, &kAdvection}) {
        for (double u : samples(*m)) {
            const auto e = m->eval(u);
            CHECK(std::abs(e.theta - (e.v * e.f - e.phi)) <= 1e-12 * std::max(1.0, std::abs(e.theta)));
            // Theta'(u) = v'(u) f(u)
            const double h = 1e-5 * std::max(1.0, std::abs(u));
            const double dtheta = (m->theta(u + h) - m->theta(u - h)) / (2 * h);
            const double dv = (m->v(u + h) - m->v(u - h)) / (2 * h);
            CHECK(std::abs(dtheta - dv * e.f) <= 1e-7 * std::max(1.0, std::abs(dtheta)));
        }
    }
}

TEST_CASE("entropy is convex and H is the inverse Hessian") {
    for (const auto* m : {&kBurgersQuad, &kBurgersLog}) {
        for (double u : samples(*m)) {
            const double h = 1e-4 * std::max(1.0, std::abs(u));
            const double second = (m->eta(u + h) - 2 * m->eta(u) + m->eta(u - h)) / (h * h);
            CHECK(second > 0.0);
            // v' = eta'' exactly; central differences of v are far more accurate than of eta.
            const double hv = 1e-5 * std::abs(u) + 1e-8;
            const double vprime = (m->v(u + hv) - m->v(u - hv)) / (2 * hv);
            CHECK(std::abs(m->H(u) * vprime - 1.0) < 1e-7);
        }
    }
    CHECK(kBurgersLog.H(2.0) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("u_of_v inverts v") {
    for (const auto* m : {&kBurgersQuad, &kBurgersLog}) {
        for (double u : samples(*m)) CHECK(m->u_of_v(m->v(u)) == doctest::Approx(u).epsilon(1e-14));
    }
}

TEST_CASE("stable differences agree with naive ones away from cancellation") {
    for (const auto* m : {&kBurgersQuad, &kBurgersLog}) {
        const auto u = samples(*m);
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            const double a = u[i], b = u[i + 1];
            CHECK(m->d_eta(a, b) == doctest::Approx(m->eta(b) - m->eta(a)).epsilon(1e-12));
            CHECK(m->d_v(a, b) == doctest::Approx(m->v(b) - m->v(a)).epsilon(1e-12));
            CHECK(m->d_theta(a, b) == doctest::Approx(m->theta(b) - m->theta(a)).epsilon(1e-12));
        }
    }
}

TEST_CASE("stable differences keep relative precision for close states") {
    const double a = 1.0, b = 1.0 + 1e-9;
    // -log(b) + log(a) = -log1p(1e-9)
    CHECK(kBurgersLog.d_eta(a, b) == doctest::Approx(-std::log1p(1e-9)).epsilon(1e-14));
    CHECK(kBurgersQuad.d_theta(a, b) ==
          doctest::Approx(1e-9 * (b * b + a * b + a * a) / 6).epsilon(1e-14));
}

TEST_CASE("x - log1p(x) series and direct branches agree") {
    for (double x : {-0.5, -1e-2, -1e-3, -9.9e-4, 1e-4, 9.9e-4, 1e-3, 1e-2, 3.0}) {
        const long double exact = static_cast<long double>(x) - std::log1p(static_cast<long double>(x));
        CAPTURE(x);
        CHECK(std::abs(x_minus_log1p(x) - static_cast<double>(exact)) <=
              1e-14 * static_cast<double>(exact));
    }
    CHECK(x_minus_log1p(0.0) == 0.0);
}
