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

#include "bsf/problems/intsum.hpp"

#include <ostream>

namespace bsf::intsum {
namespace {

std::int64_t next_scale(std::int64_t total) {
	const std::int64_t magnitude = total < 0 ? -total : total;
	return magnitude % 7 + 1;
}

} // namespace

std::int64_t list_value(std::uint64_t seed, std::size_t index) {
	// splitmix64 of (seed, index), so any element can be built on its own.
	std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + index + 1;
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
	z ^= z >> 31;
	return static_cast<std::int64_t>(z % 2001) - 1000;
}

IntSumProblem make_intsum_problem(const IntSumOptions &options) {
	IntSumProblem problem;
	problem.set_list_size = [n = options.list_size] { return n; };
	problem.set_map_list_elem = [seed = options.seed](std::size_t i) {
		return IntSumElem{i, list_value(seed, i)};
	};
	problem.set_init_parameter = [] { return IntSumParameter{}; };
	problem.parameters_output = [options](const IntSumParameter &, std::ostream &out) {
		out << "intsum n=" << options.list_size << " seed=" << options.seed << " rounds=" << options.rounds
		    << '\n';
	};
	problem.parameter_codec = {
	    [](const IntSumParameter &p, ByteWriter &w) {
		    w.put_i64(p.round);
		    w.put_i64(p.scale);
		    w.put_i64(p.total);
	    },
	    [](ByteReader &r) {
		    IntSumParameter p;
		    p.round = r.get_i64();
		    p.scale = r.get_i64();
		    p.total = r.get_i64();
		    return p;
	    },
	};

	auto &job = problem.job<0>();
	job.map_f = [ignore_odd = options.ignore_odd](const IntSumElem &elem,
	                                              const ExecutionContext<IntSumParameter> &ctx)
	    -> std::optional<std::int64_t> {
		if (ignore_odd && elem.index % 2 == 1) {
			return std::nullopt;
		}
		return elem.value * ctx.parameter().scale;
	};
	job.reduce_f = [](std::int64_t x, std::int64_t y) { return x + y; };
	job.process_results = [rounds = options.rounds](const ExtendedReduceElement<std::int64_t> &result,
	                                                IntSumParameter &parameter, JobDecision &decision) {
		parameter.total = result.value.value_or(0);
		parameter.scale = next_scale(parameter.total);
		++parameter.round;
		decision.exit = parameter.round >= static_cast<std::int64_t>(rounds);
	};
	job.iter_output = [](const ExtendedReduceElement<std::int64_t> &result, const IntSumParameter &parameter,
	                     double, int, std::ostream &out) {
		out << "total=" << parameter.total << " count=" << result.reduce_counter
		    << " scale=" << parameter.scale;
	};
	job.problem_output = [](const ExtendedReduceElement<std::int64_t> &result, const IntSumParameter &parameter,
	                        double elapsed, std::ostream &out) {
		out << "intsum total=" << parameter.total << " count=" << result.reduce_counter
		    << " rounds=" << parameter.round << " elapsed_s=" << elapsed << '\n';
	};
	job.codec = {
	    [](std::int64_t v, ByteWriter &w) { w.put_i64(v); },
	    [](ByteReader &r) { return r.get_i64(); },
	};
	return problem;
}

IntSumParameter intsum_reference(const IntSumOptions &options) {
	IntSumParameter parameter;
	do {
		std::int64_t total = 0;
		for (std::size_t i = 0; i < options.list_size; ++i) {
			if (options.ignore_odd && i % 2 == 1) {
				continue;
			}
			total += list_value(options.seed, i) * parameter.scale;
		}
		parameter.total = total;
		parameter.scale = next_scale(total);
		++parameter.round;
	} while (parameter.round < static_cast<std::int64_t>(options.rounds));
	return parameter;
}

} // namespace bsf::intsum
