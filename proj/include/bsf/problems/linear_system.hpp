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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace bsf::jacobi {

/// Dense square system A x = b. A is stored row-major.
struct LinearSystem {
	std::size_t n = 0;
	std::vector<double> a;
	std::vector<double> b;

	double at(std::size_t row, std::size_t col) const { return a[row * n + col]; }

	bool operator==(const LinearSystem &) const = default;
};

/// Iteration matrix C and vector d of x' = C x + d.
struct JacobiIterationData {
	std::size_t n = 0;
	/// Row-major C: c_ij = -a_ij / a_ii off the diagonal, c_ii = 0.
	std::vector<double> c;
	/// Column-major copy of C; column j is contiguous.
	std::vector<double> c_by_column;
	/// d_i = b_i / a_ii.
	std::vector<double> d;
	/// Threshold on the squared Euclidean norm of the step.
	double epsilon = 0.0;

	double at(std::size_t row, std::size_t col) const { return c[row * n + col]; }
	std::span<const double> column(std::size_t j) const { return {c_by_column.data() + j * n, n}; }
	std::span<const double> row(std::size_t i) const { return {c.data() + i * n, n}; }
};

/// Throws Error(ZeroDiagonal) naming the 1-based row of the first zero
/// diagonal entry, Error(InvalidConfig) for epsilon <= 0 or bad shapes.
JacobiIterationData build_iteration_data(const LinearSystem &system, double epsilon);

struct DominanceReport {
	/// |a_ii| >= sum_{j != i} |a_ij| holds for every row.
	bool dominant = false;
	/// At least one row satisfies the inequality strictly.
	bool strict_somewhere = false;

	bool operator==(const DominanceReport &) const = default;
};

DominanceReport check_diagonal_dominance(const LinearSystem &system);

/// Off-diagonal entries uniform in [-1, 1], a_ii = sum_{j != i} |a_ij| + 1,
/// b uniform in [-n, n]. Deterministic for a given (n, seed).
LinearSystem generate_diagonally_dominant_system(std::size_t n, std::uint64_t seed);

/// Max-norm of A x - b.
double residual_inf_norm(const LinearSystem &system, std::span<const double> x);

/// Reads the text format: n, then n rows of A, then b. Throws
/// Error(ParseError) on malformed input or dimension mismatch.
LinearSystem parse_system(std::istream &in);
LinearSystem load_system(const std::filesystem::path &path);
void write_system(std::ostream &out, const LinearSystem &system);

/**
 * Plain Jacobi loop x(k+1) = C x(k) + d starting from x(0) = d, stopping
 * when ||x(k+1) - x(k)||^2 < epsilon. Returns every iterate, x(0) first.
 * Throws Error(NotConverged) after `max_iterations` updates or when an
 * iterate stops being finite.
 */
std::vector<std::vector<double>> sequential_jacobi_oracle(const LinearSystem &system, double epsilon,
                                                          std::size_t max_iterations);

} // namespace bsf::jacobi
