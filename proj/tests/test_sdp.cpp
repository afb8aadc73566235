#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <sstream>

#include "fdswipt/sdp.hpp"
#include "support/instances.hpp"

using namespace fdswipt;
using namespace fdswipt::sdp;
using testsupport::random_hermitian;

namespace {

Matrix scalar_block(double v) {
  Matrix m(1, 1);
  m(0, 0) = Complex(v, 0.0);
  return m;
}

// Exhaustive feasibility-filtered grid over (X11, X22, Re X12, Im X12) for a
// single 2x2 Hermitian block, PSD enforced via the determinant condition.
// Entries range over [0, 1] / [-1, 1]; instances are generated so that the
// optimum lies inside that box. A refinement pass shrinks the step around
// the coarse argmin.
struct GridOracle {
  double best = std::numeric_limits<double>::infinity();
  double x11 = 0, x22 = 0, re = 0, im = 0;
};

double grid_objective(const SdpProblem& p, double x11, double x22, double re, double im) {
  const Matrix& c = p.objective[0];
  return c(0, 0).real() * x11 + c(1, 1).real() * x22 +
         2.0 * (c(0, 1).real() * re - c(0, 1).imag() * im);
}

bool grid_feasible(const SdpProblem& p, double x11, double x22, double re, double im) {
  for (const auto& con : p.constraints) {
    const Matrix& a = con.coeffs[0];
    const double lhs = a(0, 0).real() * x11 + a(1, 1).real() * x22 +
                       2.0 * (a(0, 1).real() * re - a(0, 1).imag() * im);
    switch (con.sense) {
      case Sense::le:
        if (lhs > con.rhs + 1e-12) return false;
        break;
      case Sense::ge:
        if (lhs < con.rhs - 1e-12) return false;
        break;
      case Sense::eq:
        if (std::abs(lhs - con.rhs) > 1e-9) return false;
        break;
    }
  }
  return true;
}

GridOracle grid_search(const SdpProblem& p, double x11_lo, double x11_hi, double x22_lo,
                       double x22_hi, double r_lo, double r_hi, double i_lo, double i_hi,
                       double step) {
  GridOracle out;
  for (double x11 = x11_lo; x11 <= x11_hi + 1e-15; x11 += step) {
    for (double x22 = x22_lo; x22 <= x22_hi + 1e-15; x22 += step) {
      const double rad2 = x11 * x22;
      for (double re = r_lo; re <= r_hi + 1e-15; re += step) {
        if (re * re > rad2) continue;
        for (double im = i_lo; im <= i_hi + 1e-15; im += step) {
          if (re * re + im * im > rad2) continue;  // PSD filter
          if (!grid_feasible(p, x11, x22, re, im)) continue;
          const double obj = grid_objective(p, x11, x22, re, im);
          if (obj < out.best) {
            out.best = obj;
            out.x11 = x11;
            out.x22 = x22;
            out.re = re;
            out.im = im;
          }
        }
      }
    }
  }
  return out;
}

GridOracle grid_oracle_2x2(const SdpProblem& p) {
  GridOracle coarse = grid_search(p, 0, 1, 0, 1, -1, 1, -1, 1, 0.01);
  if (!std::isfinite(coarse.best)) return coarse;
  const double h = 0.012;
  auto clip0 = [](double v) { return std::max(v, 0.0); };
  return grid_search(p, clip0(coarse.x11 - h), coarse.x11 + h, clip0(coarse.x22 - h),
                     coarse.x22 + h, coarse.re - h, coarse.re + h, coarse.im - h,
                     coarse.im + h, 0.001);
}

// one random bounded 2x2 instance with three inequality rows
SdpProblem random_2x2_instance(std::uint64_t seed) {
  GaussianSource rng(seed);
  SdpProblem p;
  p.block_dims = {2};
  Matrix c = random_hermitian(2, rng);
  c += Matrix::Identity(2, 2) * (1.5 + c.norm());  // positive definite objective
  c /= c.norm();
  p.objective = {c};

  for (int i = 0; i < 3; ++i) {
    LinearConstraint con;
    Matrix a = random_hermitian(2, rng);
    a += Matrix::Identity(2, 2) * (0.5 + a.norm());  // PSD-ish row
    con.coeffs = {a};
    con.sense = Sense::ge;
    con.rhs = 0.15 + 0.1 * static_cast<double>(splitmix64(seed + i) % 100) / 100.0;
    p.constraints.push_back(con);
  }
  // keep the optimum inside the grid box
  LinearConstraint cap1;
  cap1.coeffs = {scalar_block(0.0)};
  cap1.coeffs[0] = Matrix::Zero(2, 2);
  cap1.coeffs[0](0, 0) = 1.0;
  cap1.sense = Sense::le;
  cap1.rhs = 1.0;
  LinearConstraint cap2 = cap1;
  cap2.coeffs[0] = Matrix::Zero(2, 2);
  cap2.coeffs[0](1, 1) = 1.0;
  p.constraints.push_back(cap1);
  p.constraints.push_back(cap2);
  return p;
}

}  // namespace

TEST_CASE("scalar linear program: minimize 3x subject to x >= 2") {
  SdpProblem p;
  p.block_dims = {1};
  p.objective = {scalar_block(3.0)};
  LinearConstraint con;
  con.coeffs = {scalar_block(1.0)};
  con.sense = Sense::ge;
  con.rhs = 2.0;
  p.constraints = {con};

  const SdpSolution sol = solve_sdp(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(6.0).epsilon(1e-5));
  CHECK(sol.block_values[0](0, 0).real() == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("2x2 PSD determinant condition pins X11 at 0.25") {
  SdpProblem p;
  p.block_dims = {2};
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = 1.0;
  p.objective = {c};

  LinearConstraint re12;
  re12.coeffs = {Matrix::Zero(2, 2)};
  re12.coeffs[0](0, 1) = Complex(0.5, 0.0);
  re12.coeffs[0](1, 0) = Complex(0.5, 0.0);
  re12.sense = Sense::eq;
  re12.rhs = 1.0;

  LinearConstraint im12;
  im12.coeffs = {Matrix::Zero(2, 2)};
  im12.coeffs[0](0, 1) = Complex(0.0, 0.5);
  im12.coeffs[0](1, 0) = Complex(0.0, -0.5);
  im12.sense = Sense::eq;
  im12.rhs = 0.0;

  LinearConstraint x22;
  x22.coeffs = {Matrix::Zero(2, 2)};
  x22.coeffs[0](1, 1) = 1.0;
  x22.sense = Sense::eq;
  x22.rhs = 4.0;

  p.constraints = {re12, im12, x22};
  const SdpSolution sol = solve_sdp(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(sol.block_values[0](0, 1).real() == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(sol.block_values[0](1, 1).real() == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("random 2x2 instance matches the brute-force grid oracle") {
  const SdpProblem p = random_2x2_instance(404);
  const SdpSolution sol = solve_sdp(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  const GridOracle grid = grid_oracle_2x2(p);
  REQUIRE(std::isfinite(grid.best));
  CHECK(std::abs(sol.objective_value - grid.best) <= 1e-2);
  // the grid point is feasible, so the true optimum cannot exceed it
  CHECK(sol.objective_value <= grid.best + 1e-6);
}

TEST_CASE("adding a constraint never decreases the optimum") {
  SolverSettings tight;
  tight.tol = 1e-9;  // objective error well under the 1e-6 comparison below
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u}) {
    SdpProblem p = random_2x2_instance(seed);
    const SdpSolution before = solve_sdp(p, tight);
    REQUIRE(before.status == SolveStatus::optimal);

    GaussianSource rng(seed + 1000);
    LinearConstraint extra;
    Matrix a = random_hermitian(2, rng);
    a += Matrix::Identity(2, 2) * (0.5 + a.norm());
    extra.coeffs = {a};
    extra.sense = Sense::ge;
    extra.rhs = 0.2;
    p.constraints.push_back(extra);

    const SdpSolution after = solve_sdp(p, tight);
    if (after.status == SolveStatus::optimal) {
      CHECK(after.objective_value >= before.objective_value - 1e-6);
    } else {
      CHECK(after.status == SolveStatus::infeasible);
    }
  }
}

TEST_CASE("complex-to-real consistency") {
  // Solve the Hermitian instance, then its explicit real symmetric embedding
  // built at test level, and compare objectives.
  const SdpProblem p = random_2x2_instance(77);
  SolverSettings tight;
  tight.tol = 1e-9;
  const SdpSolution herm = solve_sdp(p, tight);
  REQUIRE(herm.status == SolveStatus::optimal);

  auto embed = [](const Matrix& h) {
    const Eigen::Index d = h.rows();
    Matrix t = Matrix::Zero(2 * d, 2 * d);
    t.topLeftCorner(d, d) = h.real().cast<Complex>();
    t.topRightCorner(d, d) = (-h.imag()).cast<Complex>();
    t.bottomLeftCorner(d, d) = h.imag().cast<Complex>();
    t.bottomRightCorner(d, d) = h.real().cast<Complex>();
    return Matrix(0.5 * t);
  };
  SdpProblem pr;
  pr.block_dims = {4};
  pr.objective = {embed(p.objective[0])};
  for (const auto& con : p.constraints) {
    LinearConstraint c2 = con;
    c2.coeffs = {embed(con.coeffs[0])};
    pr.constraints.push_back(c2);
  }
  const SdpSolution real_form = solve_sdp(pr, tight);
  REQUIRE(real_form.status == SolveStatus::optimal);
  CHECK(std::abs(real_form.objective_value - herm.objective_value) <= 1e-6);
}

TEST_CASE("determinism: identical problems give bitwise-identical results") {
  const SdpProblem p = random_2x2_instance(909);
  const SdpSolution a = solve_sdp(p);
  const SdpSolution b = solve_sdp(p);
  CHECK(a.status == b.status);
  CHECK(std::memcmp(&a.objective_value, &b.objective_value, sizeof(double)) == 0);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("infeasible box is detected") {
  SdpProblem p;
  p.block_dims = {1};
  p.objective = {scalar_block(1.0)};
  LinearConstraint lo;
  lo.coeffs = {scalar_block(1.0)};
  lo.sense = Sense::ge;
  lo.rhs = 2.0;
  LinearConstraint hi;
  hi.coeffs = {scalar_block(1.0)};
  hi.sense = Sense::le;
  hi.rhs = 1.0;
  p.constraints = {lo, hi};
  const SdpSolution sol = solve_sdp(p);
  CHECK(sol.status == SolveStatus::infeasible);
}

TEST_CASE("unbounded objective is flagged") {
  SdpProblem p;
  p.block_dims = {1};
  p.objective = {scalar_block(-1.0)};
  LinearConstraint lo;
  lo.coeffs = {scalar_block(1.0)};
  lo.sense = Sense::ge;
  lo.rhs = 1.0;
  p.constraints = {lo};
  const SdpSolution sol = solve_sdp(p);
  CHECK(sol.status == SolveStatus::unbounded);
}

TEST_CASE("no constraints: PSD objective floor at zero") {
  SdpProblem p;
  p.block_dims = {2};
  p.objective = {Matrix::Identity(2, 2)};
  const SdpSolution sol = solve_sdp(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(std::abs(sol.objective_value) <= 1e-5);
}

TEST_CASE("certify_solution flags PSD violations and perturbations") {
  SdpProblem p;
  p.block_dims = {1};
  p.objective = {scalar_block(1.0)};
  LinearConstraint con;
  con.coeffs = {scalar_block(1.0)};
  con.sense = Sense::ge;
  con.rhs = 2.0;
  p.constraints = {con};

  SdpSolution bad;
  bad.block_values = {scalar_block(-0.5)};
  const Certificate c1 = certify_solution(p, bad);
  CHECK_FALSE(c1.feasible);
  CHECK(c1.min_eigenvalue == doctest::Approx(-0.5));

  SdpSolution exact;
  exact.block_values = {scalar_block(2.0)};
  const Certificate c2 = certify_solution(p, exact);
  CHECK(c2.feasible);
  CHECK(c2.max_violation <= 1e-8);

  // perturbed optimum of the 2x2 pinned instance
  SdpProblem p2 = random_2x2_instance(55);
  const SdpSolution sol = solve_sdp(p2);
  REQUIRE(sol.status == SolveStatus::optimal);
  SdpSolution perturbed = sol;
  perturbed.block_values[0](0, 0) += Complex(0.1, 0.0);
  bool some_violation_grows = false;
  const Certificate c3 = certify_solution(p2, perturbed);
  // moving off the optimum by 0.1 must register in the recomputed residuals
  // unless every constraint was slack in that direction; the caps make the
  // X11 direction active for these instances
  if (c3.max_violation > 0.05) some_violation_grows = true;
  SdpSolution perturbed2 = sol;
  perturbed2.block_values[0](0, 0) -= Complex(0.1, 0.0);
  const Certificate c4 = certify_solution(p2, perturbed2);
  if (c4.max_violation > 0.05) some_violation_grows = true;
  CHECK(some_violation_grows);
}

TEST_CASE("dump writes a parseable header") {
  const SdpProblem p = random_2x2_instance(3);
  std::ostringstream os;
  p.dump(os);
  const std::string text = os.str();
  CHECK(text.find("sdp blocks 1") != std::string::npos);
  CHECK(text.find("constraints 5") != std::string::npos);
}

TEST_CASE("validate rejects malformed problems") {
  SdpProblem p;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p.block_dims = {2};
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = Complex(1.0, 0.0);  // not Hermitian
  p.objective = {bad};
  CHECK_THROWS_WITH_AS(p.validate(), "not Hermitian", std::invalid_argument);
}
