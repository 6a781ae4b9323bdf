// Copyright 2026 The qepi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QEPI_ERRORS_H
#define QEPI_ERRORS_H

#include <sstream>
#include <stdexcept>
#include <string>

namespace qepi {

/// Argument outside the mathematical domain of a function (negative photon
/// number, transmissivity outside [0, 1], ...).
class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Structurally invalid input: non-symmetric covariance, unphysical state,
/// mismatched mode counts, non-Hermitian density matrix.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// An eigen-solver or other numerical kernel produced an unusable result.
class NumericError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Embedded error estimate of an integrator or extrapolation exceeded its gate.
class AccuracyError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// The requested quantity is unbounded for this input (Fisher information of
/// a pure or rank-deficient state).
class DivergenceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Fock cutoff too small: the truncated representation lost more population
/// than allowed. Carries the measured leak.
class CutoffError : public std::runtime_error {
   public:
    CutoffError(const std::string &what, double measured_leak)
        : std::runtime_error(format(what, measured_leak)), measured_leak_(measured_leak) {
    }

    double measured_leak() const noexcept {
        return measured_leak_;
    }

   private:
    static std::string format(const std::string &what, double leak) {
        std::ostringstream out;
        out << what << " (measured leak " << leak << ")";
        return out.str();
    }

    double measured_leak_;
};

/// A report or data file could not be written or read.
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace qepi

#endif  // QEPI_ERRORS_H
