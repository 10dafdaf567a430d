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

#include "bsf/problems/jacobi.hpp"

#include "bsf/error.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace bsf::jacobi {
namespace {

constexpr std::size_t kShownCoordinates = 4;

void print_vector_head(std::ostream &out, std::span<const double> x) {
	out << "x=";
	const std::size_t shown = std::min(x.size(), kShownCoordinates);
	for (std::size_t i = 0; i < shown; ++i) {
		out << (i ? "," : "") << x[i];
	}
	if (x.size() > shown) {
		out << ",...";
	}
}

std::shared_ptr<JacobiState> make_state(SystemSource source, double epsilon) {
	if (!source) {
		throw Error(ErrorCode::InvalidConfig, "jacobi problem needs a system source");
	}
	auto state = std::make_shared<JacobiState>();
	state->source = std::move(source);
	state->epsilon = epsilon;
	return state;
}

const JacobiIterationData &data_of(const JacobiState &state) {
	if (!state.data) {
		throw Error(ErrorCode::InitFailed, "jacobi problem used before init");
	}
	return *state.data;
}

/// Callbacks common to both variants.
template <typename P>
void fill_common(P &problem, const std::shared_ptr<JacobiState> &state) {
	problem.init = [state] {
		state->data = std::make_shared<const JacobiIterationData>(
		    build_iteration_data(state->source(), state->epsilon));
		return true;
	};
	problem.set_list_size = [state] { return data_of(*state).n; };
	problem.set_map_list_elem = [](std::size_t i) { return JacobiMapElem{i}; };
	// x(0) = d
	problem.set_init_parameter = [state] { return JacobiParameter{data_of(*state).d}; };
	problem.parameters_output = [state](const JacobiParameter &, std::ostream &out) {
		const auto &data = data_of(*state);
		out << "jacobi n=" << data.n << " eps=" << std::scientific << data.epsilon << std::fixed << '\n';
	};
	problem.parameter_codec = parameter_codec();

	auto &job = problem.template job<0>();
	job.iter_output = [](const auto &, const JacobiParameter &parameter, double, int, std::ostream &out) {
		print_vector_head(out, parameter.x);
	};
	job.problem_output = [](const auto &, const JacobiParameter &parameter, double elapsed, std::ostream &out) {
		out << "solution ";
		print_vector_head(out, parameter.x);
		out << " elapsed_s=" << elapsed << '\n';
	};
}

} // namespace

std::vector<double> map_f_column(std::size_t j, std::span<const double> x, const JacobiIterationData &data) {
	const auto column = data.column(j);
	std::vector<double> out(column.size());
	const double xj = x[j];
	for (std::size_t i = 0; i < column.size(); ++i) {
		out[i] = xj * column[i];
	}
	return out;
}

std::vector<double> reduce_vec_add(const std::vector<double> &u, const std::vector<double> &v) {
	if (u.size() != v.size()) {
		throw Error(ErrorCode::InvalidConfig, "vector lengths differ in reduce");
	}
	std::vector<double> out(u.size());
	for (std::size_t i = 0; i < u.size(); ++i) {
		out[i] = u[i] + v[i];
	}
	return out;
}

double squared_distance(std::span<const double> u, std::span<const double> v) {
	double sum = 0.0;
	for (std::size_t i = 0; i < u.size(); ++i) {
		const double diff = u[i] - v[i];
		sum += diff * diff;
	}
	return sum;
}

JacobiStep process_results_jacobi(std::span<const double> s, std::span<const double> x_prev,
                                  const JacobiIterationData &data) {
	if (s.size() != data.n || x_prev.size() != data.n) {
		throw Error(ErrorCode::InvalidConfig, "vector length does not match the system");
	}
	JacobiStep step;
	step.x_next.resize(data.n);
	for (std::size_t i = 0; i < data.n; ++i) {
		step.x_next[i] = s[i] + data.d[i];
	}
	step.exit = squared_distance(step.x_next, x_prev) < data.epsilon;
	return step;
}

double map_f_coordinate(std::size_t i, std::span<const double> x, const JacobiIterationData &data) {
	const auto row = data.row(i);
	double sum = 0.0;
	for (std::size_t j = 0; j < row.size(); ++j) {
		sum += row[j] * x[j];
	}
	return sum + data.d[i];
}

CoordinateBlock merge_coordinates(const CoordinateBlock &lhs, const CoordinateBlock &rhs) {
	CoordinateBlock out;
	out.entries.reserve(lhs.entries.size() + rhs.entries.size());
	std::merge(lhs.entries.begin(), lhs.entries.end(), rhs.entries.begin(), rhs.entries.end(),
	           std::back_inserter(out.entries),
	           [](const auto &a, const auto &b) { return a.first < b.first; });
	const auto duplicate = std::adjacent_find(out.entries.begin(), out.entries.end(),
	                                          [](const auto &a, const auto &b) { return a.first == b.first; });
	if (duplicate != out.entries.end()) {
		throw Error(ErrorCode::InvalidConfig,
		            "coordinate " + std::to_string(duplicate->first) + " produced twice");
	}
	return out;
}

JacobiProblem make_jacobi_problem(SystemSource source, double epsilon) {
	auto state = make_state(std::move(source), epsilon);
	JacobiProblem problem;
	fill_common(problem, state);

	auto &job = problem.job<0>();
	job.map_f = [state](const JacobiMapElem &elem, const ExecutionContext<JacobiParameter> &ctx)
	    -> std::optional<std::vector<double>> {
		return map_f_column(elem.index, ctx.parameter().x, data_of(*state));
	};
	job.reduce_f = reduce_vec_add;
	job.process_results = [state](const ExtendedReduceElement<std::vector<double>> &result,
	                              JacobiParameter &parameter, JobDecision &decision) {
		const auto &data = data_of(*state);
		const std::vector<double> zero(data.n, 0.0);
		const std::vector<double> &s = result.reduce_counter > 0 ? *result.value : zero;
		JacobiStep step = process_results_jacobi(s, parameter.x, data);
		parameter.x = std::move(step.x_next);
		decision.exit = step.exit;
	};
	job.codec = vector_codec();
	return problem;
}

JacobiMapOnlyProblem make_jacobi_map_only_problem(SystemSource source, double epsilon) {
	auto state = make_state(std::move(source), epsilon);
	JacobiMapOnlyProblem problem;
	fill_common(problem, state);

	auto &job = problem.job<0>();
	job.map_f = [state](const JacobiMapElem &elem, const ExecutionContext<JacobiParameter> &ctx)
	    -> std::optional<CoordinateBlock> {
		// The element's global position comes from the skeleton variables.
		const std::size_t position = ctx.address_offset() + ctx.number_in_sublist();
		if (position != elem.index) {
			throw Error(ErrorCode::InvalidConfig, "map element " + std::to_string(elem.index) +
			                                          " seen at position " + std::to_string(position));
		}
		const double value = map_f_coordinate(position, ctx.parameter().x, data_of(*state));
		return CoordinateBlock{{{static_cast<std::uint32_t>(position), value}}};
	};
	job.reduce_f = merge_coordinates;
	job.process_results = [state](const ExtendedReduceElement<CoordinateBlock> &result,
	                              JacobiParameter &parameter, JobDecision &decision) {
		const auto &data = data_of(*state);
		if (result.reduce_counter != data.n || !result.value || result.value->entries.size() != data.n) {
			throw Error(ErrorCode::InvalidConfig, "map-only reduce did not produce all " +
			                                          std::to_string(data.n) + " coordinates");
		}
		std::vector<double> next(data.n);
		for (std::size_t i = 0; i < data.n; ++i) {
			next[i] = result.value->entries[i].second;
		}
		decision.exit = squared_distance(next, parameter.x) < data.epsilon;
		parameter.x = std::move(next);
	};
	job.codec = coordinate_block_codec();
	return problem;
}

Codec<JacobiParameter> parameter_codec() {
	return {
	    [](const JacobiParameter &p, ByteWriter &w) { w.put_f64_array(p.x); },
	    [](ByteReader &r) { return JacobiParameter{r.get_f64_array()}; },
	};
}

Codec<std::vector<double>> vector_codec() {
	return {
	    [](const std::vector<double> &v, ByteWriter &w) { w.put_f64_array(v); },
	    [](ByteReader &r) { return r.get_f64_array(); },
	};
}

Codec<CoordinateBlock> coordinate_block_codec() {
	return {
	    [](const CoordinateBlock &block, ByteWriter &w) {
		    w.put_u32(static_cast<std::uint32_t>(block.entries.size()));
		    for (const auto &[index, value] : block.entries) {
			    w.put_u32(index);
			    w.put_f64(value);
		    }
	    },
	    [](ByteReader &r) {
		    CoordinateBlock block;
		    const std::uint32_t count = r.get_u32();
		    if (r.remaining() < std::size_t{count} * 12) {
			    throw Error(ErrorCode::MalformedFrame, "coordinate block truncated");
		    }
		    block.entries.reserve(count);
		    for (std::uint32_t k = 0; k < count; ++k) {
			    const std::uint32_t index = r.get_u32();
			    block.entries.emplace_back(index, r.get_f64());
		    }
		    return block;
	    },
	};
}

} // namespace bsf::jacobi
