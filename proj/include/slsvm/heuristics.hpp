#pragma once

// Small demonstration problems for the GA, ACO and PSO instantiations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slsvm/engine.hpp"

namespace slsvm::demo {

// ---- OneMax GA ----

using Bits = std::vector<std::uint8_t>;

struct OneMaxParams {
  std::size_t n = 8;
  std::size_t pop = 20;
  std::optional<double> mut_rate;  // default 1/n
  std::size_t tournament = 2;
  std::size_t max_generations = 200;
  std::optional<std::vector<Bits>> initial;  // replaces the random population

  double mutation_rate() const { return mut_rate.value_or(1.0 / static_cast<double>(n)); }
};

struct OneMaxExtra {
  OneMaxParams params;
  std::vector<std::int64_t> fitness;  // per individual, from the last evaluate
  std::size_t generation = 0;
};

struct OneMaxTraits {
  using Pexp = std::size_t;  // bit length
  using Algorithm = OneMaxParams;
  using Problem = std::size_t;
  using Solutions = std::vector<Bits>;
  using Solution = Bits;
  using Fpw = std::int64_t;  // fitness of the incumbent
  using Extra = OneMaxExtra;
};

// Throws ValidationError unless n >= 1, pop >= 2, 0 <= mut_rate <= 1,
// tournament >= 1 and the initial population (if any) has pop strings of n bits.
FunctionSuite<OneMaxTraits> onemax_ga_suite(const OneMaxParams& params);

std::int64_t onemax(const Bits& bits);

// ---- grid-path ACO ----

struct Edge {
  std::size_t from;
  std::size_t to;
  double cost;
};

// Weighted DAG; the source is the only node without incoming edges and the
// sink the only node without outgoing ones.
struct Graph {
  std::size_t nodes = 0;
  std::vector<Edge> edges;
};

struct GridPathParams {
  std::size_t ants = 10;
  std::size_t max_iterations = 50;
};

struct GridPathProblem {
  Graph graph;
  std::size_t source = 0;
  std::size_t sink = 0;
  std::vector<std::vector<std::size_t>> out;  // edge ids leaving each node
};

using EdgePath = std::vector<std::size_t>;

struct GridPathExtra {
  GridPathParams params;
  std::size_t iteration = 0;
};

struct GridPathTraits {
  using Pexp = Graph;
  using Algorithm = GridPathParams;
  using Problem = GridPathProblem;
  using Solutions = std::vector<EdgePath>;  // one per ant
  using Solution = EdgePath;
  using Fpw = std::vector<double>;  // pheromone per edge
  using Extra = GridPathExtra;
};

// Validates the graph (acyclic, unique source and sink, every node on some
// source-sink path, positive costs); throws ValidationError otherwise.
GridPathProblem make_gridpath_problem(const Graph& graph);
FunctionSuite<GridPathTraits> gridpath_aco_suite(const GridPathParams& params);
double path_cost(const GridPathProblem& problem, const EdgePath& path);

// ---- sphere PSO ----

struct SphereParams {
  std::size_t dim = 2;
  std::size_t particles = 10;
  std::size_t max_iterations = 100;
  double inertia = 0.7;
  double cognitive = 1.4;
  double social = 1.4;
  double noise = 0.01;
  double init_range = 5.0;
  std::optional<std::vector<std::vector<double>>> initial;  // replaces random positions
};

struct SphereParticle {
  std::vector<double> x;
  std::vector<double> v;

  friend bool operator==(const SphereParticle&, const SphereParticle&) = default;
};

struct PersonalBest {
  std::vector<double> x;
  double value;
};

struct SphereExtra {
  SphereParams params;
  std::size_t iteration = 0;
};

struct SphereTraits {
  using Pexp = std::size_t;  // dimension
  using Algorithm = SphereParams;
  using Problem = std::size_t;
  using Solutions = std::vector<SphereParticle>;
  using Solution = SphereParticle;
  using Fpw = std::vector<PersonalBest>;
  using Extra = SphereExtra;
};

FunctionSuite<SphereTraits> sphere_pso_suite(const SphereParams& params);
double sphere(const std::vector<double>& x);

}  // namespace slsvm::demo
