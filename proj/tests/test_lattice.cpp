#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "shiftorth/lattice.hpp"
#include "shiftorth/projection.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace shiftorth {
namespace {

using testing::Gen;

TEST(LatticeDomain, RejectsBadExtents) {
  EXPECT_THROW(LatticeDomain({}, {}), PreconditionError);
  EXPECT_THROW(LatticeDomain({2, 2, 2, 2}, {1, 1, 1, 1}), PreconditionError);
  EXPECT_THROW(LatticeDomain({2, 2}, {1}), PreconditionError);
  EXPECT_THROW(LatticeDomain({0}, {1}), PreconditionError);
  EXPECT_THROW(LatticeDomain({2}, {-1}), PreconditionError);
  const int big = std::numeric_limits<int>::max();
  EXPECT_THROW(LatticeDomain({big, big, big}, {big, big, big}), PreconditionError);
}

TEST(LatticeDomain, Sizes) {
  const LatticeDomain d({3, 4}, {2, 5});
  EXPECT_EQ(d.dim(), 2);
  EXPECT_EQ(d.shift_count(), 12u);
  EXPECT_EQ(d.depth_count(), 10u);
  EXPECT_EQ(d.size(), 120u);
}

TEST(Flatten, SingleDepthIsIdentityOnShifts) {
  const auto d = LatticeDomain::line(2, 1);
  EXPECT_EQ(flatten({{1}, {0}}, d), 0u);
  EXPECT_EQ(flatten({{1}, {1}}, d), 1u);
}

TEST(Flatten, DepthAxesAreOutermost) {
  EXPECT_EQ(flatten({{2}, {0}}, LatticeDomain::line(2, 2)), 2u);
  // depth (2,1) of N=(2,3) is flat depth 3; shift (1,0) of L=(2,2) is 2.
  EXPECT_EQ(flatten({{2, 1}, {1, 0}}, LatticeDomain({2, 2}, {2, 3})), 3u * 4u + 2u);
}

TEST(Flatten, TwoDimensionalRoundTripCoversAllSixteen) {
  const LatticeDomain d({2, 2}, {2, 2});
  std::vector<bool> seen(d.size(), false);
  for (int i1 = 1; i1 <= 2; ++i1)
    for (int i2 = 1; i2 <= 2; ++i2)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 2; ++j2) {
          const LatticeIndex idx{{i1, i2}, {j1, j2}};
          const std::size_t f = flatten(idx, d);
          ASSERT_LT(f, d.size());
          EXPECT_FALSE(seen[f]);
          seen[f] = true;
          EXPECT_EQ(unflatten(f, d), idx);
        }
}

TEST(Flatten, OutOfRangeComponentsThrow) {
  const LatticeDomain d({2, 3}, {2, 2});
  EXPECT_THROW(flatten({{0, 1}, {0, 0}}, d), IndexError);
  EXPECT_THROW(flatten({{1, 3}, {0, 0}}, d), IndexError);
  EXPECT_THROW(flatten({{1, 1}, {2, 0}}, d), IndexError);
  EXPECT_THROW(flatten({{1, 1}, {0, -1}}, d), IndexError);
  EXPECT_THROW(flatten({{1}, {0, 0}}, d), IndexError);
  EXPECT_THROW(unflatten(d.size(), d), IndexError);
}

TEST(FlattenProperty, BijectionForRandomDomainsUpTo4096) {
  Gen gen(101);
  for (int c = 0; c < 40; ++c) {
    const LatticeDomain d = gen.domain(gen.uniform_int(1, 3), 4096, 16);
    SCOPED_TRACE("case " + std::to_string(c));
    for (std::size_t f = 0; f < d.size(); ++f) {
      const LatticeIndex idx = unflatten(f, d);
      ASSERT_EQ(flatten(idx, d), f);
      // Each depth slice is contiguous.
      ASSERT_EQ(f / d.shift_count(), d.flatten_depth(idx.depth));
      ASSERT_EQ(f % d.shift_count(), d.flatten_shift(idx.shift));
    }
  }
}

TEST(CoeffTensor, ValidatesData) {
  const auto d = LatticeDomain::line(2, 1);
  EXPECT_THROW(CoeffTensor(d, ComplexVector(3)), DomainMismatch);
  EXPECT_THROW(CoeffTensor(d, ComplexVector{1.0, std::nan("")}), PreconditionError);
  EXPECT_THROW(
      CoeffTensor(d, ComplexVector{1.0, Complex(0, std::numeric_limits<double>::infinity())}),
      PreconditionError);
  CoeffTensor a(d);
  const CoeffTensor b(LatticeDomain::line(2, 2));
  EXPECT_THROW(a += b, DomainMismatch);
  EXPECT_THROW(inner(a, b), DomainMismatch);
}

TEST(CoeffTensor, DepthSliceIsContiguousBlock) {
  CoeffTensor t(LatticeDomain({2, 3}, {2, 1}));
  t.at({{2, 1}, {1, 2}}) = 7.0;
  const auto slice = t.depth_slice(1);
  ASSERT_EQ(slice.size(), 6u);
  EXPECT_EQ(slice[1 * 3 + 2], Complex(7.0));
}

TEST(Shift, ZeroShiftIsIdentity) {
  Gen gen(3);
  const auto d = LatticeDomain({3, 2}, {2, 1});
  const CoeffTensor v = gen.complex_tensor(d);
  const std::vector<int> zero{0, 0};
  EXPECT_EQ(max_abs_diff(shift(v, zero), v), 0.0);
}

TEST(Shift, CyclicRotation) {
  const CoeffTensor v(LatticeDomain::line(3, 1), {1.0, 2.0, 3.0});
  const std::vector<int> s{1};
  const CoeffTensor w = shift(v, s);
  EXPECT_EQ(w[0], Complex(3.0));
  EXPECT_EQ(w[1], Complex(1.0));
  EXPECT_EQ(w[2], Complex(2.0));
}

TEST(Shift, RejectsOutOfRange) {
  const CoeffTensor v(LatticeDomain::line(3, 1));
  const std::vector<int> bad{3};
  const std::vector<int> wrong_dim{0, 0};
  EXPECT_THROW(shift(v, bad), IndexError);
  EXPECT_THROW(shift(v, wrong_dim), IndexError);
}

TEST(ShiftProperty, GroupAction) {
  Gen gen(17);
  for (int c = 0; c < 60; ++c) {
    SCOPED_TRACE("case " + std::to_string(c));
    const LatticeDomain d = gen.domain(gen.uniform_int(1, 3), 256);
    const CoeffTensor v = gen.complex_tensor(d);
    const auto s = gen.shift_index(d);
    const auto t = gen.shift_index(d);
    std::vector<int> sum(s.size()), inverse(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      sum[k] = (s[k] + t[k]) % d.shifts()[k];
      inverse[k] = (d.shifts()[k] - s[k]) % d.shifts()[k];
    }
    EXPECT_EQ(max_abs_diff(shift(shift(v, s), t), shift(v, sum)), 0.0);
    EXPECT_EQ(max_abs_diff(shift(shift(v, s), inverse), v), 0.0);
  }
}

TEST(GramShift, ZeroArgumentGivesZeroMatrix) {
  Gen gen(5);
  const auto d = LatticeDomain::line(4, 2);
  const Eigen::MatrixXcd g = gram_shift(CoeffTensor(d), gen.complex_tensor(d));
  EXPECT_EQ(g.rows(), 4);
  EXPECT_EQ(g.cwiseAbs().maxCoeff(), 0.0);
}

TEST(GramShift, DeltaGivesIdentity) {
  CoeffTensor delta(LatticeDomain::line(2, 1));
  delta[0] = 1.0;
  const Eigen::MatrixXcd g = gram_shift(delta, delta);
  EXPECT_TRUE(g.isApprox(Eigen::MatrixXcd::Identity(2, 2)));
  EXPECT_EQ((g - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(GramShift, RejectsDomainMismatch) {
  EXPECT_THROW(gram_shift(CoeffTensor(LatticeDomain::line(2, 1)),
                          CoeffTensor(LatticeDomain::line(3, 1))),
               DomainMismatch);
}

TEST(GramShiftProperty, MatchesDirectSummation) {
  Gen gen(23);
  for (int c = 0; c < 30; ++c) {
    SCOPED_TRACE("case " + std::to_string(c));
    const LatticeDomain d = gen.domain(gen.uniform_int(1, 3), 128);
    const CoeffTensor g = gen.complex_tensor(d);
    const CoeffTensor f = gen.complex_tensor(d);
    const Eigen::MatrixXcd gram = gram_shift(g, f);
    const auto oracle = testing::direct_gram(g, f);
    for (std::size_t a = 0; a < d.shift_count(); ++a) {
      for (std::size_t b = 0; b < d.shift_count(); ++b) {
        ASSERT_LE(std::abs(gram(a, b) - oracle[a][b]), 1e-12 * (1.0 + std::abs(oracle[a][b])));
      }
    }
    const ComplexVector corr = shift_correlation(g, f);
    for (std::size_t t = 0; t < d.shift_count(); ++t) {
      ASSERT_LE(std::abs(corr[t] - oracle[0][t]), 1e-12 * (1.0 + std::abs(corr[t])));
    }
  }
}

TEST(GramShiftProperty, HermitianPsdAndIdentityOnMembers) {
  Gen gen(29);
  for (int c = 0; c < 30; ++c) {
    SCOPED_TRACE("case " + std::to_string(c));
    const LatticeDomain d = gen.domain(gen.uniform_int(1, 2), 128);
    const CoeffTensor f = gen.complex_tensor(d);
    const Eigen::MatrixXcd g = gram_shift(f, f);
    EXPECT_LE((g - g.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * g.cwiseAbs().maxCoeff());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10 * g.cwiseAbs().maxCoeff());

    const CoeffTensor member = project_sso(f);
    const Eigen::MatrixXcd id = gram_shift(member, member);
    const auto n = static_cast<Eigen::Index>(d.shift_count());
    EXPECT_LE((id - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

}  // namespace
}  // namespace shiftorth
