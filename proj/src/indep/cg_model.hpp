#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tabular/data_table.hpp"

namespace omicause {

// Maximized conditional-Gaussian log-likelihood of a variable block: a
// multinomial over the observed discrete configurations times a Gaussian over
// the continuous block inside each configuration.
//
// A configuration with fewer than c + 2 rows (c continuous variables) keeps its
// multinomial term, but its rows are scored under the pooled Gaussian (mean
// and covariance over all rows). Every covariance gets a ridge of
// 1e-8 * trace / c before inversion.
struct CgFit {
    double loglik = 0.0;
    double params = 0.0;  // free parameters actually fitted
    std::size_t configs = 0;
    std::size_t sparse_configs = 0;
};

CgFit cg_loglik(const DataTable& table, std::span<const int> vars);

// Dense group id per row for the joint configuration of categorical columns.
// Ids follow the lexicographic order of the configurations.
struct RowGroups {
    std::vector<std::uint32_t> group;
    std::size_t count = 0;
};

RowGroups group_rows(const DataTable& table, std::span<const int> categorical_vars);

}  // namespace omicause
