#pragma once

#include "cuspdrift/error.hpp"

namespace cuspdrift {

/// Accuracy targets shared by the evaluators.
///
/// All arithmetic is IEEE double; `working_precision` documents the number of
/// decimal digits the caller expects and is validated, and `target_abs_tol`
/// drives truncation and quadrature stopping rules.
struct PrecisionConfig {
    int working_precision = 16;
    double target_abs_tol = 1e-12;

    void validate() const {
        if (working_precision < 16)
            throw DomainError("working_precision must be at least 16 digits");
        if (!(target_abs_tol > 0.0))
            throw DomainError("target_abs_tol must be positive");
    }
};

}  // namespace cuspdrift
