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

#include "bsf/problems/linear_system.hpp"

#include "bsf/error.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace bsf::jacobi {
namespace {

void check_shape(const LinearSystem &system) {
	if (system.n == 0 || system.a.size() != system.n * system.n || system.b.size() != system.n) {
		throw Error(ErrorCode::InvalidConfig, "linear system has inconsistent dimensions");
	}
}

/// Next non-blank line, or false at end of input.
bool next_data_line(std::istream &in, std::string &line, std::size_t &line_no) {
	while (std::getline(in, line)) {
		++line_no;
		if (line.find_first_not_of(" \t\r") != std::string::npos) {
			return true;
		}
	}
	return false;
}

std::vector<double> parse_reals(const std::string &line, std::size_t expected, std::size_t line_no) {
	std::istringstream tokens(line);
	std::vector<double> values;
	std::string token;
	while (tokens >> token) {
		std::size_t used = 0;
		double value = 0.0;
		try {
			value = std::stod(token, &used);
		} catch (const std::exception &) {
			used = 0;
		}
		if (used != token.size()) {
			throw Error(ErrorCode::ParseError,
			            "line " + std::to_string(line_no) + ": '" + token + "' is not a real number");
		}
		values.push_back(value);
	}
	if (values.size() != expected) {
		throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
		                                       std::to_string(expected) + " values, found " +
		                                       std::to_string(values.size()));
	}
	return values;
}

} // namespace

JacobiIterationData build_iteration_data(const LinearSystem &system, double epsilon) {
	check_shape(system);
	if (!(epsilon > 0.0)) {
		throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
	}
	const std::size_t n = system.n;
	JacobiIterationData data;
	data.n = n;
	data.epsilon = epsilon;
	data.c.assign(n * n, 0.0);
	data.c_by_column.assign(n * n, 0.0);
	data.d.resize(n);
	for (std::size_t i = 0; i < n; ++i) {
		const double diag = system.at(i, i);
		if (diag == 0.0) {
			throw Error(ErrorCode::ZeroDiagonal, "a_" + std::to_string(i + 1) + std::to_string(i + 1) +
			                                         " is zero (row " + std::to_string(i + 1) + ")");
		}
		for (std::size_t j = 0; j < n; ++j) {
			const double value = j == i ? 0.0 : -system.at(i, j) / diag;
			data.c[i * n + j] = value;
			data.c_by_column[j * n + i] = value;
		}
		data.d[i] = system.b[i] / diag;
	}
	return data;
}

DominanceReport check_diagonal_dominance(const LinearSystem &system) {
	check_shape(system);
	DominanceReport report{true, false};
	for (std::size_t i = 0; i < system.n; ++i) {
		double off_diagonal = 0.0;
		for (std::size_t j = 0; j < system.n; ++j) {
			if (j != i) {
				off_diagonal += std::abs(system.at(i, j));
			}
		}
		const double diag = std::abs(system.at(i, i));
		if (diag < off_diagonal) {
			report.dominant = false;
		} else if (diag > off_diagonal) {
			report.strict_somewhere = true;
		}
	}
	if (!report.dominant) {
		report.strict_somewhere = false;
	}
	return report;
}

LinearSystem generate_diagonally_dominant_system(std::size_t n, std::uint64_t seed) {
	if (n == 0) {
		throw Error(ErrorCode::InvalidConfig, "system dimension must be at least 1");
	}
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> entry(-1.0, 1.0);
	const double bound = static_cast<double>(n);
	std::uniform_real_distribution<double> rhs(-bound, bound);

	LinearSystem system;
	system.n = n;
	system.a.assign(n * n, 0.0);
	system.b.resize(n);
	for (std::size_t i = 0; i < n; ++i) {
		double off_diagonal = 0.0;
		for (std::size_t j = 0; j < n; ++j) {
			if (j != i) {
				const double value = entry(rng);
				system.a[i * n + j] = value;
				off_diagonal += std::abs(value);
			}
		}
		system.a[i * n + i] = off_diagonal + 1.0;
	}
	for (auto &value : system.b) {
		value = rhs(rng);
	}
	return system;
}

double residual_inf_norm(const LinearSystem &system, std::span<const double> x) {
	check_shape(system);
	if (x.size() != system.n) {
		throw Error(ErrorCode::InvalidConfig, "vector length does not match the system");
	}
	double worst = 0.0;
	for (std::size_t i = 0; i < system.n; ++i) {
		double row = 0.0;
		for (std::size_t j = 0; j < system.n; ++j) {
			row += system.at(i, j) * x[j];
		}
		worst = std::max(worst, std::abs(row - system.b[i]));
	}
	return worst;
}

LinearSystem parse_system(std::istream &in) {
	std::string line;
	std::size_t line_no = 0;
	if (!next_data_line(in, line, line_no)) {
		throw Error(ErrorCode::ParseError, "empty matrix file");
	}
	std::istringstream header(line);
	long long n = 0;
	std::string rest;
	if (!(header >> n) || (header >> rest) || n <= 0) {
		throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
		                                       ": expected a positive dimension, got '" + line + "'");
	}
	LinearSystem system;
	system.n = static_cast<std::size_t>(n);
	system.a.reserve(system.n * system.n);
	for (std::size_t row = 0; row < system.n; ++row) {
		if (!next_data_line(in, line, line_no)) {
			throw Error(ErrorCode::ParseError, "expected " + std::to_string(system.n) +
			                                       " matrix rows, found " + std::to_string(row));
		}
		const auto values = parse_reals(line, system.n, line_no);
		system.a.insert(system.a.end(), values.begin(), values.end());
	}
	if (!next_data_line(in, line, line_no)) {
		throw Error(ErrorCode::ParseError, "missing right-hand side vector b");
	}
	system.b = parse_reals(line, system.n, line_no);
	if (next_data_line(in, line, line_no)) {
		throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unexpected extra data");
	}
	return system;
}

LinearSystem load_system(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in) {
		throw Error(ErrorCode::IoError, "cannot open matrix file " + path.string());
	}
	return parse_system(in);
}

void write_system(std::ostream &out, const LinearSystem &system) {
	check_shape(system);
	out << system.n << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
	for (std::size_t i = 0; i < system.n; ++i) {
		for (std::size_t j = 0; j < system.n; ++j) {
			out << (j ? " " : "") << system.at(i, j);
		}
		out << '\n';
	}
	for (std::size_t i = 0; i < system.n; ++i) {
		out << (i ? " " : "") << system.b[i];
	}
	out << '\n';
}

std::vector<std::vector<double>> sequential_jacobi_oracle(const LinearSystem &system, double epsilon,
                                                          std::size_t max_iterations) {
	const JacobiIterationData data = build_iteration_data(system, epsilon);
	const std::size_t n = data.n;
	std::vector<std::vector<double>> iterates{data.d};
	for (std::size_t k = 0; k < max_iterations; ++k) {
		const std::vector<double> &x = iterates.back();
		std::vector<double> next(n);
		double step_sq = 0.0;
		bool finite = true;
		for (std::size_t i = 0; i < n; ++i) {
			double s = 0.0;
			for (std::size_t j = 0; j < n; ++j) {
				s += data.at(i, j) * x[j];
			}
			next[i] = s + data.d[i];
			const double diff = next[i] - x[i];
			step_sq += diff * diff;
			finite = finite && std::isfinite(next[i]);
		}
		iterates.push_back(std::move(next));
		if (!finite) {
			throw Error(ErrorCode::NotConverged,
			            "iterate " + std::to_string(k + 1) + " is not finite; the iteration diverges");
		}
		if (step_sq < epsilon) {
			return iterates;
		}
	}
	throw Error(ErrorCode::NotConverged,
	            "no convergence within " + std::to_string(max_iterations) + " iterations");
}

} // namespace bsf::jacobi
