#pragma once

#include <string>
#include <vector>

#include "collinlab/linalg.hpp"

namespace collinlab {

/// A response vector plus design matrix with named columns. When
/// has_intercept is set, column 0 of X is the all-ones intercept column and
/// names[0] labels it.
struct Dataset {
    Vector y;
    Matrix X;
    std::vector<std::string> names;
    bool has_intercept = true;
    std::string response_name = "y";

    std::size_t n() const { return X.rows(); }
    std::size_t k() const { return X.cols(); }

    /// Index of the first non-intercept column (0 or 1).
    std::size_t first_regressor() const { return has_intercept ? 1 : 0; }
    std::size_t regressor_count() const { return k() - first_regressor(); }

    /// Throws if the shape invariants are broken (row counts, name count,
    /// intercept column of ones, non-finite cells).
    void validate() const;
};

/// Convenience builder: prepends an intercept column when requested and
/// fills in default column names if none are given.
Dataset make_dataset(Vector y, Matrix regressors, std::vector<std::string> names = {},
                     bool add_intercept = true, std::string response_name = "y");

}  // namespace collinlab
