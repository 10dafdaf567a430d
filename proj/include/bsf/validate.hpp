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

#include "bsf/config.hpp"
#include "bsf/error.hpp"
#include "bsf/problem.hpp"

#include <concepts>
#include <string>
#include <utility>
#include <vector>

namespace bsf {
namespace detail {

/// Calls `fn(std::integral_constant<std::size_t, J>{}, job<J>)` for the
/// job numbered `job_case`.
template <std::size_t J = 0, typename P, typename Fn>
void with_job(P &problem, int job_case, Fn &&fn) {
	if constexpr (J < std::remove_cvref_t<P>::job_count) {
		if (job_case == static_cast<int>(J)) {
			fn(std::integral_constant<std::size_t, J>{}, std::get<J>(problem.jobs));
			return;
		}
		with_job<J + 1>(problem, job_case, std::forward<Fn>(fn));
	} else {
		throw Error(ErrorCode::InvalidJobCase, "job " + std::to_string(job_case) + " is not defined");
	}
}

template <typename T>
bool codec_round_trips(const Codec<T> &codec, const T &value) {
	const Bytes bytes = codec.to_bytes(value);
	T decoded = codec.from_bytes(bytes);
	if constexpr (std::equality_comparable<T>) {
		return decoded == value;
	} else {
		return codec.to_bytes(decoded) == bytes;
	}
}

} // namespace detail

/**
 * Checks a problem against a run configuration before any iteration: every
 * job up to max_job_case must be implemented, the map-list must have at
 * least num_workers elements, and the parameter codec must round-trip the
 * initial parameter. Call after the problem's init.
 */
template <typename P, typename M, typename... Rs>
void validate(const Problem<P, M, Rs...> &problem, const RunConfig &config) {
	check_config(config);
	if (!problem.set_list_size || !problem.set_map_list_elem || !problem.set_init_parameter) {
		throw Error(ErrorCode::InvalidConfig,
		            "problem must define set_list_size, set_map_list_elem and set_init_parameter");
	}
	if (static_cast<std::size_t>(config.max_job_case) >= sizeof...(Rs)) {
		throw Error(ErrorCode::MissingJobImplementation,
		            "max_job_case " + std::to_string(config.max_job_case) + " but the problem defines " +
		                std::to_string(sizeof...(Rs)) + " job(s)");
	}
	for (int job_case = 0; job_case <= config.max_job_case; ++job_case) {
		detail::with_job(problem, job_case, [&](auto, const auto &job) {
			std::string missing;
			if (!job.map_f) missing += " map_f";
			if (!job.reduce_f) missing += " reduce_f";
			if (!job.process_results) missing += " process_results";
			if (!job.codec) missing += " codec";
			if (!missing.empty()) {
				throw Error(ErrorCode::MissingJobImplementation,
				            "job " + std::to_string(job_case) + " lacks" + missing);
			}
		});
	}

	const std::size_t list_size = problem.set_list_size();
	if (list_size < config.num_workers) {
		throw Error(ErrorCode::ListTooShort,
		            "list size " + std::to_string(list_size) +
		                " must be greater than or equal to the number of workers " +
		                std::to_string(config.num_workers));
	}

	if (!problem.parameter_codec) {
		throw Error(ErrorCode::CodecMismatch, "problem has no parameter codec");
	}
	bool round_trips = false;
	try {
		round_trips = detail::codec_round_trips(problem.parameter_codec, problem.set_init_parameter());
	} catch (const Error &e) {
		throw Error(ErrorCode::CodecMismatch, std::string("parameter codec failed: ") + e.what());
	}
	if (!round_trips) {
		throw Error(ErrorCode::CodecMismatch, "decode(encode(parameter)) differs from the parameter");
	}
}

/// Materialises elements [first, first + count) of the map-list.
template <typename P, typename M, typename... Rs>
std::vector<M> build_map_list(const Problem<P, M, Rs...> &problem, std::size_t first,
                              std::size_t count) {
	std::vector<M> list;
	list.reserve(count);
	for (std::size_t i = first; i < first + count; ++i) {
		list.push_back(problem.set_map_list_elem(i));
	}
	return list;
}

/// The whole map-list, element i built from set_map_list_elem(i).
template <typename P, typename M, typename... Rs>
std::vector<M> build_map_list(const Problem<P, M, Rs...> &problem) {
	return build_map_list(problem, 0, problem.set_list_size());
}

} // namespace bsf
