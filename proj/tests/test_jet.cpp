#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "coexist/channel.hpp"
#include "coexist/jet.hpp"

using namespace coexist;

namespace {

// Derivatives of exp(k s) at s: k^j e^{k s}.
Jet exp_jet(double k, double s, int order) {
  std::vector<double> d;
  for (int j = 0; j <= order; ++j) d.push_back(std::pow(k, j) * std::exp(k * s));
  return {s, d};
}

}  // namespace

TEST(Jet, IdentityIsMultiplicativeUnit) {
  const Jet a = exp_jet(-0.7, 0.3, 4);
  const Jet b = jet_mul(a, Jet::identity(0.3, 4));
  for (int j = 0; j <= 4; ++j) EXPECT_DOUBLE_EQ(b[j], a[j]);
  EXPECT_EQ(Jet::identity(1.0, 3).value(), 1.0);
  EXPECT_EQ(Jet::identity(1.0, 3)[2], 0.0);
}

TEST(Jet, ProductOfExponentials) {
  const Jet p = exp_jet(-0.7, 0.3, 5) * exp_jet(1.9, 0.3, 5);
  const Jet q = exp_jet(1.2, 0.3, 5);
  for (int j = 0; j <= 5; ++j) EXPECT_NEAR(p[j], q[j], 1e-13 * std::abs(q[j]));
}

TEST(Jet, ProductOfPolynomials) {
  // f = s^2, g = s^3 at s = 2: (fg)''' of s^5 = 60 s^2 = 240
  const Jet f(2.0, {4.0, 4.0, 2.0, 0.0});
  const Jet g(2.0, {8.0, 12.0, 12.0, 6.0});
  const Jet h = jet_mul(f, g);
  EXPECT_DOUBLE_EQ(h[0], 32.0);
  EXPECT_DOUBLE_EQ(h[1], 80.0);
  EXPECT_DOUBLE_EQ(h[2], 160.0);
  EXPECT_DOUBLE_EQ(h[3], 240.0);
}

TEST(Jet, PowerMatchesRepeatedProduct) {
  const auto d = laplace_derivatives(FadingModel::nakagami(2), 0.4, 1.1, 4);
  const Jet a(0.4, d);
  for (long long n : {0LL, 1LL, 2LL, 5LL, 18LL}) {
    Jet slow = Jet::identity(0.4, 4);
    for (long long i = 0; i < n; ++i) slow = slow * a;
    const Jet fast = jet_pow(a, n);
    for (int j = 0; j <= 4; ++j) EXPECT_NEAR(fast[j], slow[j], 1e-13 * std::max(1.0, std::abs(slow[j])));
  }
}

TEST(Jet, PowerOfExponential) {
  const Jet p = jet_pow(exp_jet(-0.25, 1.0, 3), 18);
  const Jet q = exp_jet(-4.5, 1.0, 3);
  for (int j = 0; j <= 3; ++j) EXPECT_NEAR(p[j], q[j], 1e-13 * std::abs(q[j]));
}

TEST(Jet, RejectsMismatchedOperands) {
  EXPECT_THROW(jet_mul(Jet::identity(0.0, 2), Jet::identity(0.0, 3)), DomainError);
  EXPECT_THROW(jet_mul(Jet::identity(0.0, 2), Jet::identity(0.5, 2)), DomainError);
  EXPECT_THROW(jet_pow(Jet::identity(0.0, 2), -1), DomainError);
  EXPECT_THROW(Jet(0.0, {}), DomainError);
}
