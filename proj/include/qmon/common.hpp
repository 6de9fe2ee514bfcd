#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qmon {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Every recoverable failure is a named exception so callers can tell a
// modelling problem (bad parameters) from a numerical one (leak, blowup).
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct GridTooNarrow : std::runtime_error {
  explicit GridTooNarrow(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalInstability : std::runtime_error {
  explicit NumericalInstability(const std::string& msg) : std::runtime_error(msg) {}
};

struct BoundaryLeak : std::runtime_error {
  explicit BoundaryLeak(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonPositiveVariance : std::runtime_error {
  explicit NonPositiveVariance(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroPeak : std::runtime_error {
  explicit ZeroPeak(const std::string& msg) : std::runtime_error(msg) {}
};

struct FitDiverged : std::runtime_error {
  explicit FitDiverged(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateProfile : std::runtime_error {
  explicit DegenerateProfile(const std::string& msg) : std::runtime_error(msg) {}
};

struct SizeGuard : std::runtime_error {
  explicit SizeGuard(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qmon
