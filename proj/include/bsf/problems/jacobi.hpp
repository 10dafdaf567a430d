/*
 *   Copyright 2026 The BSF Skeleton Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "bsf/problem.hpp"
#include "bsf/problems/linear_system.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace bsf::jacobi {

/// Order parameters: the current approximation x(k).
struct JacobiParameter {
	std::vector<double> x;

	bool operator==(const JacobiParameter &) const = default;
};

/// Map-list element: a 0-based column (Map+Reduce) or row (Map-only) index.
struct JacobiMapElem {
	std::size_t index = 0;
};

/// Coordinates of x(k+1) keyed by their global position. Folding two blocks
/// is a merge of disjoint index sets.
struct CoordinateBlock {
	std::vector<std::pair<std::uint32_t, double>> entries;

	bool operator==(const CoordinateBlock &) const = default;
};

// Building blocks shared by both problem variants.

/// x_j times column j of C.
std::vector<double> map_f_column(std::size_t j, std::span<const double> x, const JacobiIterationData &data);

std::vector<double> reduce_vec_add(const std::vector<double> &u, const std::vector<double> &v);

struct JacobiStep {
	std::vector<double> x_next;
	bool exit = false;
};

/// x_next = s + d; exit when ||x_next - x_prev||^2 < epsilon.
JacobiStep process_results_jacobi(std::span<const double> s, std::span<const double> x_prev,
                                  const JacobiIterationData &data);

/// Coordinate i of the next approximation: d_i + sum_j c_ij x_j.
double map_f_coordinate(std::size_t i, std::span<const double> x, const JacobiIterationData &data);

/// Disjoint merge; overlapping indices throw Error(InvalidConfig).
CoordinateBlock merge_coordinates(const CoordinateBlock &lhs, const CoordinateBlock &rhs);

/// Squared Euclidean norm of u - v.
double squared_distance(std::span<const double> u, std::span<const double> v);

using SystemSource = std::function<LinearSystem()>;

/// Problem data, filled by the problem's init and read-only afterwards.
struct JacobiState {
	SystemSource source;
	double epsilon = 0.0;
	std::shared_ptr<const JacobiIterationData> data;
};

using JacobiProblem = Problem<JacobiParameter, JacobiMapElem, std::vector<double>>;
using JacobiMapOnlyProblem = Problem<JacobiParameter, JacobiMapElem, CoordinateBlock>;

/// Jacobi as Map + Reduce: map column j to x_j c_j, fold by vector addition,
/// add d on the master.
JacobiProblem make_jacobi_problem(SystemSource source, double epsilon);

/// Jacobi as Map only: map row i to coordinate i of x(k+1); the fold only
/// assembles the coordinates.
JacobiMapOnlyProblem make_jacobi_map_only_problem(SystemSource source, double epsilon);

Codec<JacobiParameter> parameter_codec();
Codec<std::vector<double>> vector_codec();
Codec<CoordinateBlock> coordinate_block_codec();

} // namespace bsf::jacobi
