// Copyright 2026 The qrtkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRTKIT_TYPES_HPP
#define QRTKIT_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qrtkit {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

// Shared numeric tolerances. All entropic values are in bits (log base 2).
namespace tol {
inline constexpr double herm = 1e-10;         // hermiticity, absolute on entries
inline constexpr double psd = 1e-9;           // eigenvalue floor for PSD checks
inline constexpr double tp = 1e-8;            // trace-preservation, sup norm
inline constexpr double membership = 1e-7;    // affine free-set membership, absolute
inline constexpr double support = 1e-9;       // support cutoff, relative to op norm
inline constexpr double reconstruct = 1e-9;   // eigh reconstruction, relative
inline constexpr double solver_gap = 1e-7;    // SDP relative duality gap
inline constexpr double fw_gap = 1e-6;        // Frank-Wolfe certificate gap, bits
}  // namespace tol

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimMismatch : Error {
  explicit DimMismatch(const std::string& msg) : Error("DimMismatch: " + msg) {}
};

struct NotHermitian : Error {
  explicit NotHermitian(const std::string& msg) : Error("NotHermitian: " + msg) {}
};

struct NotDensity : Error {
  explicit NotDensity(const std::string& msg) : Error("NotDensity: " + msg) {}
};

struct NotCp : Error {
  explicit NotCp(const std::string& msg) : Error("NotCP: " + msg) {}
};

struct NotFullRank : Error {
  explicit NotFullRank(const std::string& msg) : Error("NotFullRank: " + msg) {}
};

struct NotTp : Error {
  explicit NotTp(const std::string& msg) : Error("NotTP: " + msg) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& msg) : Error("InvalidArgument: " + msg) {}
};

struct SolverFailure : Error {
  explicit SolverFailure(const std::string& msg) : Error("SolverFailure: " + msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error("ParseError: " + msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("ConfigError: " + msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("IoError: " + msg) {}
};

}  // namespace qrtkit

#endif  // QRTKIT_TYPES_HPP
