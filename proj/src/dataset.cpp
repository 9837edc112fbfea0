#include "collinlab/dataset.hpp"

#include <cmath>

namespace collinlab {

void Dataset::validate() const {
    if (X.rows() == 0 || X.cols() == 0) {
        throw DimensionMismatchError("dataset: empty design matrix");
    }
    if (y.size() != X.rows()) {
        throw DimensionMismatchError("dataset: rows(X) != length(y)");
    }
    if (!names.empty() && names.size() != X.cols()) {
        throw DimensionMismatchError("dataset: one name per design column required");
    }
    if (has_intercept) {
        for (std::size_t i = 0; i < X.rows(); ++i) {
            if (X(i, 0) != 1.0) {
                throw DimensionMismatchError("dataset: intercept column must be all ones");
            }
        }
    }
    for (double v : X.data()) {
        if (!std::isfinite(v)) throw DimensionMismatchError("dataset: non-finite design entry");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw DimensionMismatchError("dataset: non-finite response entry");
    }
}

Dataset make_dataset(Vector y, Matrix regressors, std::vector<std::string> names,
                     bool add_intercept, std::string response_name) {
    Dataset d;
    d.y = std::move(y);
    d.has_intercept = add_intercept;
    d.response_name = std::move(response_name);

    if (add_intercept) {
        Matrix x(regressors.rows(), regressors.cols() + 1);
        for (std::size_t i = 0; i < regressors.rows(); ++i) {
            x(i, 0) = 1.0;
            for (std::size_t j = 0; j < regressors.cols(); ++j) x(i, j + 1) = regressors(i, j);
        }
        d.X = std::move(x);
        d.names.push_back("intercept");
    } else {
        d.X = std::move(regressors);
    }

    if (names.empty()) {
        for (std::size_t j = 0; j < d.regressor_count(); ++j) {
            d.names.push_back("x" + std::to_string(j + 1));
        }
    } else {
        for (auto& nm : names) d.names.push_back(std::move(nm));
    }
    d.validate();
    return d;
}

}  // namespace collinlab
