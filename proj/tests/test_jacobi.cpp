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

#include <doctest.h>

#include "bsf/engine.hpp"
#include "bsf/inprocess_transport.hpp"
#include "bsf/problems/jacobi.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace bsf;
using namespace bsf::jacobi;

namespace {

LinearSystem two_by_two() { return LinearSystem{2, {2, 1, 1, 3}, {3, 4}}; }

ErrorCode code_of(auto &&fn) {
	try {
		fn();
	} catch (const Error &e) {
		return e.code();
	}
	FAIL("no error thrown");
	return ErrorCode::IoError;
}

/// Brute-force C x straight from A, independent of the iteration data.
std::vector<double> c_times_x(const LinearSystem &sys, const std::vector<double> &x) {
	std::vector<double> out(sys.n, 0.0);
	for (std::size_t i = 0; i < sys.n; ++i) {
		for (std::size_t j = 0; j < sys.n; ++j) {
			if (i != j) {
				out[i] += -sys.at(i, j) / sys.at(i, i) * x[j];
			}
		}
	}
	return out;
}

} // namespace

TEST_CASE("build_iteration_data on the 2x2 example") {
	const auto data = build_iteration_data(two_by_two(), 1e-18);
	CHECK(data.at(0, 0) == 0.0);
	CHECK(data.at(0, 1) == -0.5);
	CHECK(data.at(1, 0) == -1.0 / 3.0);
	CHECK(data.at(1, 1) == 0.0);
	CHECK(data.d[0] == 1.5);
	CHECK(data.d[1] == 4.0 / 3.0);
	CHECK(data.column(1)[0] == -0.5);
	CHECK(data.row(1)[0] == -1.0 / 3.0);
}

TEST_CASE("build_iteration_data on the identity") {
	const LinearSystem eye{3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {4, -5, 6}};
	const auto data = build_iteration_data(eye, 1e-9);
	for (double c : data.c) {
		CHECK(c == 0.0);
	}
	CHECK(data.d == eye.b);
}

TEST_CASE("build_iteration_data names a zero diagonal") {
	const LinearSystem bad{2, {1, 2, 3, 0}, {1, 1}};
	try {
		build_iteration_data(bad, 1e-9);
		FAIL("expected ZeroDiagonal");
	} catch (const Error &e) {
		CHECK(e.code() == ErrorCode::ZeroDiagonal);
		CHECK(std::string(e.what()).find("row 2") != std::string::npos);
	}
	CHECK(code_of([] { build_iteration_data(two_by_two(), 0.0); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("check_diagonal_dominance") {
	CHECK(check_diagonal_dominance(two_by_two()) == DominanceReport{true, true});
	CHECK(check_diagonal_dominance(LinearSystem{2, {1, 1, 1, 1}, {0, 0}}) == DominanceReport{true, false});
	CHECK(check_diagonal_dominance(LinearSystem{2, {1, 5, 0, 1}, {0, 0}}) == DominanceReport{false, false});
}

TEST_CASE("map_f_column") {
	const auto data = build_iteration_data(two_by_two(), 1e-9);
	const std::vector<double> x{2, 3};
	CHECK(map_f_column(1, x, data) == std::vector<double>{-1.5, 0.0});
	const std::vector<double> zero_x{0, 3};
	for (double v : map_f_column(0, zero_x, data)) {
		CHECK(v == 0.0);
	}
	const auto one = build_iteration_data(LinearSystem{1, {4}, {2}}, 1e-9);
	CHECK(map_f_column(0, std::vector<double>{17.0}, one) == std::vector<double>{0.0});
}

TEST_CASE("reduce_vec_add") {
	CHECK(reduce_vec_add({0, -0.5}, {-2.0 / 3.0, 0}) == std::vector<double>{-2.0 / 3.0, -0.5});
	CHECK(reduce_vec_add({1.25, -3}, {0, 0}) == std::vector<double>{1.25, -3});
	CHECK_THROWS_AS(reduce_vec_add({1}, {1, 2}), Error);
}

TEST_CASE("folding mapped columns reproduces C x") {
	std::mt19937_64 rng(5);
	std::uniform_real_distribution<double> u(-1, 1);
	for (std::size_t n : {5u, 17u, 64u}) {
		const auto sys = generate_diagonally_dominant_system(n, n);
		const auto data = build_iteration_data(sys, 1e-9);
		std::vector<double> x(n);
		for (auto &v : x) v = u(rng) * 10;
		std::vector<double> sum = map_f_column(0, x, data);
		for (std::size_t j = 1; j < n; ++j) {
			sum = reduce_vec_add(sum, map_f_column(j, x, data));
		}
		const auto expected = c_times_x(sys, x);
		for (std::size_t i = 0; i < n; ++i) {
			CHECK(std::abs(sum[i] - expected[i]) <= 1e-12);
		}
	}
}

TEST_CASE("process_results_jacobi") {
	const auto data = build_iteration_data(two_by_two(), 1e-18);
	const std::vector<double> s{-2.0 / 3.0, -0.5};
	const auto step = process_results_jacobi(s, data.d, data);
	CHECK(step.x_next[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
	CHECK(step.x_next[1] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
	CHECK_FALSE(step.exit);

	// At the exact solution the step is zero.
	const std::vector<double> solution{1, 1};
	const auto fixed = process_results_jacobi(c_times_x(two_by_two(), solution), solution, data);
	CHECK(fixed.x_next == solution);
	CHECK(fixed.exit);

	const auto loose = build_iteration_data(two_by_two(), 1e300);
	CHECK(process_results_jacobi(s, loose.d, loose).exit);
}

TEST_CASE("map_f_coordinate") {
	const auto data = build_iteration_data(two_by_two(), 1e-9);
	CHECK(map_f_coordinate(0, std::vector<double>{1.5, 4.0 / 3.0}, data) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
	CHECK(map_f_coordinate(1, std::vector<double>{1, 1}, data) == 1.0);
	const LinearSystem eye{2, {1, 0, 0, 1}, {7, 8}};
	const auto eye_data = build_iteration_data(eye, 1e-9);
	CHECK(map_f_coordinate(1, std::vector<double>{100, 200}, eye_data) == 8.0);
}

TEST_CASE("merge_coordinates is a disjoint merge") {
	const CoordinateBlock a{{{0, 1.0}, {3, 4.0}}};
	const CoordinateBlock b{{{1, 2.0}}};
	CHECK(merge_coordinates(a, b) == CoordinateBlock{{{0, 1.0}, {1, 2.0}, {3, 4.0}}});
	CHECK(merge_coordinates(b, a) == merge_coordinates(a, b));
	CHECK_THROWS_AS(merge_coordinates(a, a), Error);
}

TEST_CASE("sequential_jacobi_oracle") {
	const auto iterates = sequential_jacobi_oracle(two_by_two(), 1e-18, 1000);
	REQUIRE(iterates.size() >= 3);
	CHECK(iterates[0] == std::vector<double>{1.5, 4.0 / 3.0});
	CHECK(iterates[1][0] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
	CHECK(iterates[1][1] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
	CHECK(residual_inf_norm(two_by_two(), iterates.back()) < 1e-6);

	const LinearSystem eye{2, {1, 0, 0, 1}, {3, -2}};
	const auto trivial = sequential_jacobi_oracle(eye, 1e-18, 10);
	REQUIRE(trivial.size() == 2);
	CHECK(trivial[1] == eye.b);

	CHECK(code_of([] { sequential_jacobi_oracle(LinearSystem{2, {1, 5, 5, 1}, {1, 1}}, 1e-18, 500); }) ==
	      ErrorCode::NotConverged);
}

TEST_CASE("generated systems are deterministic and strictly dominant") {
	CHECK(generate_diagonally_dominant_system(4, 7) == generate_diagonally_dominant_system(4, 7));
	CHECK_FALSE(generate_diagonally_dominant_system(4, 7) == generate_diagonally_dominant_system(4, 8));
	for (std::uint64_t seed = 0; seed < 20; ++seed) {
		const auto sys = generate_diagonally_dominant_system(1 + seed * 3, seed);
		CHECK(check_diagonal_dominance(sys) == DominanceReport{true, true});
		for (std::size_t i = 0; i < sys.n; ++i) {
			CHECK(std::abs(sys.b[i]) <= static_cast<double>(sys.n));
		}
	}
}

TEST_CASE("512x512 seed 42 converges in the recorded number of iterations") {
	const auto sys = generate_diagonally_dominant_system(512, 42);
	const auto iterates = sequential_jacobi_oracle(sys, 1e-18, 200);
	CHECK(iterates.size() - 1 == 9);
	CHECK(residual_inf_norm(sys, iterates.back()) < 1e-6);
}

TEST_CASE("matrix file parsing") {
	std::istringstream good("2\n2 1\n1 3\n3 4\n");
	CHECK(parse_system(good) == two_by_two());

	std::stringstream round;
	const auto sys = generate_diagonally_dominant_system(6, 3);
	write_system(round, sys);
	CHECK(parse_system(round) == sys);

	const char *bad_inputs[] = {
	    "",                      // empty
	    "2\n2 1\n1 3\n",         // missing b
	    "2\n2 1 0\n1 3\n3 4\n",  // row too long
	    "2\n2\n1 3\n3 4\n",      // row too short
	    "2\n2 1\n1 3\n3\n",      // b too short
	    "2\n2 1\n1 3\n3 4\n5\n", // trailing data
	    "2\n2 x\n1 3\n3 4\n",    // not a number
	    "-1\n",                  // bad dimension
	    "2 2\n2 1\n1 3\n3 4\n",  // bad header
	};
	for (const char *text : bad_inputs) {
		std::istringstream in(text);
		CHECK(code_of([&] { parse_system(in); }) == ErrorCode::ParseError);
	}
	CHECK(code_of([] { load_system("/nonexistent/matrix.txt"); }) == ErrorCode::IoError);
}

TEST_CASE("worker map and master reduce on the 2x2 example with two workers") {
	auto problem = make_jacobi_problem(two_by_two, 1e-18);
	REQUIRE(problem.init());
	const auto &job = problem.job<0>();
	const JacobiParameter parameter{{1.5, 4.0 / 3.0}};
	std::vector<ExtendedReduceElement<std::vector<double>>> partials;
	for (std::size_t rank = 0; rank < 2; ++rank) {
		const std::vector<JacobiMapElem> sublist{{rank}};
		ExecutionContext<JacobiParameter> ctx;
		detail::ContextAccess::assign_worker(ctx, rank, 2, rank, 1);
		detail::ContextAccess::assign_order(ctx, parameter, 0, 0);
		const auto mapped = worker_map(job, std::span<const JacobiMapElem>(sublist), ctx);
		REQUIRE(mapped.size() == 1);
		CHECK(mapped[0].reduce_counter == 1);
		partials.push_back(worker_reduce(std::span(mapped), job.reduce_f));
	}
	CHECK(*partials[0].value == std::vector<double>{0.0, -0.5});
	CHECK(*partials[1].value == std::vector<double>{-2.0 / 3.0, 0.0});
	const auto total = master_reduce(std::span<const ExtendedReduceElement<std::vector<double>>>(partials), job.reduce_f);
	CHECK(total.reduce_counter == 2);
	CHECK(*total.value == std::vector<double>{-2.0 / 3.0, -0.5});

	MasterState<JacobiParameter> state{parameter};
	RunConfig config;
	const auto decision = master_iterate(problem, config, job, state, total);
	CHECK_FALSE(decision.exit);
	CHECK(state.iter_counter == 1);
	CHECK(state.parameter.x[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
	CHECK(state.parameter.x[1] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("jacobi problems solve the 2x2 example in every engine") {
	const auto problem = make_jacobi_problem(two_by_two, 1e-18);
	const auto seq = run_sequential(problem, RunConfig{});
	CHECK(std::abs(seq.final_parameter.x[0] - 1.0) < 1e-6);
	CHECK(std::abs(seq.final_parameter.x[1] - 1.0) < 1e-6);
	const auto oracle = sequential_jacobi_oracle(two_by_two(), 1e-18, 1000);
	CHECK(seq.iterations == oracle.size() - 1);
	CHECK(seq.final_parameter.x == oracle.back());

	for (std::size_t k : {1u, 2u}) {
		RunConfig config;
		config.num_workers = k;
		InProcessTransport transport(k);
		const auto par = run_parallel(problem, config, transport);
		CHECK(par.iterations == seq.iterations);
		if (k == 1) {
			CHECK(par.final_parameter == seq.final_parameter);
		}
	}

	const auto map_only = make_jacobi_map_only_problem(two_by_two, 1e-18);
	const auto seq_map = run_sequential(map_only, RunConfig{});
	CHECK(seq_map.iterations == seq.iterations);
	CHECK(seq_map.final_parameter.x == oracle.back());
}

TEST_CASE("one iteration at the fixed point returns it and stops") {
	auto problem = make_jacobi_problem(two_by_two, 1e-30);
	problem.set_init_parameter = [] { return JacobiParameter{{1.0, 1.0}}; };
	const auto outcome = run_sequential(problem, RunConfig{});
	CHECK(outcome.iterations == 1);
	CHECK(outcome.final_parameter.x == std::vector<double>{1.0, 1.0});
}

TEST_CASE("map-only placement reconstructs the whole next iterate for every K") {
	const auto sys = generate_diagonally_dominant_system(23, 9);
	const auto data = build_iteration_data(sys, 1e-18);
	for (std::size_t k = 1; k <= 7; ++k) {
		auto problem = make_jacobi_map_only_problem([&] { return sys; }, 1e300);
		std::vector<double> produced;
		problem.job<0>().process_results = [&](const ExtendedReduceElement<CoordinateBlock> &result,
		                                       JacobiParameter &, JobDecision &d) {
			REQUIRE(result.reduce_counter == sys.n);
			for (std::size_t i = 0; i < sys.n; ++i) {
				REQUIRE(result.value->entries[i].first == i);
				produced.push_back(result.value->entries[i].second);
			}
			d.exit = true;
		};
		RunConfig config;
		config.num_workers = k;
		InProcessTransport transport(k);
		run_parallel(problem, config, transport);
		REQUIRE(produced.size() == sys.n);
		for (std::size_t i = 0; i < sys.n; ++i) {
			CHECK(produced[i] == map_f_coordinate(i, data.d, data));
		}
	}
}

TEST_CASE("codecs round-trip") {
	const JacobiParameter p{{1.0, -2.5, 1e-300}};
	CHECK(parameter_codec().from_bytes(parameter_codec().to_bytes(p)) == p);
	const CoordinateBlock block{{{4, 0.5}, {9, -1.0}}};
	CHECK(coordinate_block_codec().from_bytes(coordinate_block_codec().to_bytes(block)) == block);
	Bytes truncated = coordinate_block_codec().to_bytes(block);
	truncated.pop_back();
	CHECK_THROWS_AS(coordinate_block_codec().from_bytes(truncated), Error);
}
