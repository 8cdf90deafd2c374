#pragma once

#include <random>

#include "support/oracles.hpp"
#include "tabular/data_table.hpp"

// x, y, z from tests/oracles/derive_values.py (levels coded by first appearance).
inline omicause::DataTable small_xyz() {
    return omicause::parse_csv(
               "x,y,z\n"
               "a,u,0\na,u,1\na,v,0\na,w,1\na,u,0\na,v,1\n"
               "b,v,0\nb,w,1\nb,w,0\nb,w,1\nb,u,0\nb,w,1\n",
               "", {{"z", omicause::VariableKind::categorical(2)}})
        .table;
}

// n rows of (x, y, z) with x = z + e1, y = rho_xy * x + z + e2.
inline omicause::DataTable gaussian_xyz(std::size_t n, double rho_xy, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = g(rng);
        x[i] = z[i] + g(rng);
        y[i] = rho_xy * x[i] + z[i] + g(rng);
    }
    return omicause::DataTable(
        {oracle::continuous("x", x), oracle::continuous("y", y), oracle::continuous("z", z)});
}
