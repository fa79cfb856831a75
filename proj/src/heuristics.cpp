#include "slsvm/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slsvm::demo {

std::int64_t onemax(const Bits& bits) { return std::count(bits.begin(), bits.end(), std::uint8_t{1}); }

FunctionSuite<OneMaxTraits> onemax_ga_suite(const OneMaxParams& params) {
  using S = State<OneMaxTraits>;
  if (params.n < 1) throw ValidationError("onemax: n must be at least 1");
  if (params.pop < 2) throw ValidationError("onemax: population must be at least 2");
  const double rate = params.mutation_rate();
  if (!(rate >= 0.0 && rate <= 1.0)) throw ValidationError("onemax: mutation rate must lie in [0, 1]");
  if (params.tournament < 1) throw ValidationError("onemax: tournament size must be at least 1");
  if (params.initial) {
    if (params.initial->size() != params.pop) throw ValidationError("onemax: initial population has wrong size");
    for (const auto& b : *params.initial) {
      if (b.size() != params.n) throw ValidationError("onemax: initial individual has wrong length");
    }
  }

  FunctionSuite<OneMaxTraits> suite;
  suite.init = [](const OneMaxParams& p) { return OneMaxExtra{p, {}, 0}; };
  suite.set_problem = [](const std::size_t& n, const S& s, Rng&) {
    if (n != s.extra().params.n) throw ValidationError("onemax: problem size differs from the configured n");
    return std::pair{n, s.extra()};
  };
  suite.generate = [](const S& s, Rng& rng) {
    const auto& p = s.extra().params;
    if (p.initial) return std::pair{*p.initial, s.extra()};
    std::vector<Bits> pop(p.pop, Bits(p.n));
    for (auto& ind : pop) {
      for (auto& bit : ind) bit = rng.bernoulli(0.5) ? 1 : 0;
    }
    return std::pair{std::move(pop), s.extra()};
  };
  suite.aeval = [](const S& s, Rng&) {
    OneMaxExtra x = s.extra();
    x.fitness.clear();
    for (const auto& ind : s.sols()) x.fitness.push_back(onemax(ind));
    std::int64_t best = *std::max_element(x.fitness.begin(), x.fitness.end());
    if (s.has_fpw()) best = std::max(best, s.fpw());
    return std::pair{best, std::move(x)};
  };
  suite.beval = [](const S& s, Rng&) {
    const auto& f = s.extra().fitness;
    const auto at = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
    if (s.has_best() && onemax(s.best()) >= f[at]) return std::pair{s.best(), s.extra()};
    return std::pair{s.sols()[at], s.extra()};
  };
  suite.stop = [](const S& s) {
    const auto& x = s.extra();
    return s.fpw() == static_cast<std::int64_t>(s.prob()) || x.generation >= x.params.max_generations;
  };
  suite.instance_rules.emplace(
      "select", InstanceRule<OneMaxTraits>{"selection", SolsFn<OneMaxTraits>([](const S& s, Rng& rng) {
                                             const auto& pop = s.sols();
                                             const auto& f = s.extra().fitness;
                                             std::vector<Bits> chosen;
                                             for (std::size_t k = 0; k < pop.size(); ++k) {
                                               std::size_t win = rng.uniform_index(pop.size());
                                               for (std::size_t t = 1; t < s.extra().params.tournament; ++t) {
                                                 const std::size_t c = rng.uniform_index(pop.size());
                                                 if (f[c] > f[win]) win = c;
                                               }
                                               chosen.push_back(pop[win]);
                                             }
                                             return std::pair{std::move(chosen), s.extra()};
                                           })});
  suite.instance_rules.emplace(
      "cross", InstanceRule<OneMaxTraits>{"crossover", SolsFn<OneMaxTraits>([](const S& s, Rng& rng) {
                                            auto pop = s.sols();
                                            const std::size_t n = s.prob();
                                            for (std::size_t i = 0; i + 1 < pop.size() && n > 1; i += 2) {
                                              const std::size_t cut = 1 + rng.uniform_index(n - 1);
                                              std::swap_ranges(pop[i].begin() + static_cast<std::ptrdiff_t>(cut),
                                                               pop[i].end(),
                                                               pop[i + 1].begin() + static_cast<std::ptrdiff_t>(cut));
                                            }
                                            return std::pair{std::move(pop), s.extra()};
                                          })});
  suite.instance_rules.emplace(
      "mutate", InstanceRule<OneMaxTraits>{"mutation", SolsFn<OneMaxTraits>([](const S& s, Rng& rng) {
                                             auto pop = s.sols();
                                             OneMaxExtra x = s.extra();
                                             const double rate = x.params.mutation_rate();
                                             if (rate > 0) {
                                               for (auto& ind : pop) {
                                                 for (auto& bit : ind) {
                                                   if (rng.bernoulli(rate)) bit ^= 1;
                                                 }
                                               }
                                             }
                                             ++x.generation;
                                             return std::pair{std::move(pop), std::move(x)};
                                           })});
  suite.next_gen_expansion =
      Statement::chain({Statement::instance("select"), Statement::instance("cross"), Statement::instance("mutate")});
  return suite;
}

GridPathProblem make_gridpath_problem(const Graph& graph) {
  if (graph.nodes < 2) throw ValidationError("gridpath: graph needs at least two nodes");
  GridPathProblem p;
  p.graph = graph;
  p.out.assign(graph.nodes, {});
  std::vector<std::vector<std::size_t>> in(graph.nodes);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const Edge& edge = graph.edges[e];
    if (edge.from >= graph.nodes || edge.to >= graph.nodes) throw ValidationError("gridpath: edge to unknown node");
    if (!(edge.cost > 0)) throw ValidationError("gridpath: edge costs must be positive");
    p.out[edge.from].push_back(e);
    in[edge.to].push_back(e);
  }
  std::vector<std::size_t> sources, sinks;
  for (std::size_t v = 0; v < graph.nodes; ++v) {
    if (in[v].empty()) sources.push_back(v);
    if (p.out[v].empty()) sinks.push_back(v);
  }
  if (sources.size() != 1 || sinks.size() != 1) {
    throw ValidationError("gridpath: disconnected graph (need exactly one source and one sink)");
  }
  p.source = sources[0];
  p.sink = sinks[0];

  // Kahn's algorithm; every node must be drained for the graph to be acyclic.
  std::vector<std::size_t> indegree(graph.nodes), order;
  for (std::size_t v = 0; v < graph.nodes; ++v) indegree[v] = in[v].size();
  std::vector<std::size_t> ready{p.source};
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (auto e : p.out[v]) {
      if (--indegree[graph.edges[e].to] == 0) ready.push_back(graph.edges[e].to);
    }
  }
  if (order.size() != graph.nodes) throw ValidationError("gridpath: graph has a cycle");
  // With one source, one sink and no cycle, every node lies on a source-sink path.
  return p;
}

double path_cost(const GridPathProblem& problem, const EdgePath& path) {
  double c = 0;
  for (auto e : path) c += problem.graph.edges.at(e).cost;
  return c;
}

namespace {

EdgePath ant_walk(const GridPathProblem& p, const std::vector<double>* pheromone, Rng& rng) {
  EdgePath path;
  std::size_t v = p.source;
  while (v != p.sink) {
    const auto& out = p.out[v];
    double total = 0;
    for (auto e : out) total += (pheromone ? (*pheromone)[e] : 0.0) + 1.0;
    double pick = rng.uniform01() * total;
    std::size_t chosen = out.back();
    for (auto e : out) {
      pick -= (pheromone ? (*pheromone)[e] : 0.0) + 1.0;
      if (pick < 0) {
        chosen = e;
        break;
      }
    }
    path.push_back(chosen);
    v = p.graph.edges[chosen].to;
  }
  return path;
}

}  // namespace

FunctionSuite<GridPathTraits> gridpath_aco_suite(const GridPathParams& params) {
  using S = State<GridPathTraits>;
  if (params.ants < 1) throw ValidationError("gridpath: at least one ant is required");
  FunctionSuite<GridPathTraits> suite;
  suite.init = [](const GridPathParams& p) { return GridPathExtra{p, 0}; };
  suite.set_problem = [](const Graph& g, const S& s, Rng&) { return std::pair{make_gridpath_problem(g), s.extra()}; };
  suite.generate = [](const S& s, Rng& rng) {
    std::vector<EdgePath> paths;
    for (std::size_t k = 0; k < s.extra().params.ants; ++k) paths.push_back(ant_walk(s.prob(), nullptr, rng));
    return std::pair{std::move(paths), s.extra()};
  };
  suite.next = [](const S& s, Rng& rng) {
    GridPathExtra x = s.extra();
    std::vector<EdgePath> paths;
    for (std::size_t k = 0; k < x.params.ants; ++k) paths.push_back(ant_walk(s.prob(), &s.fpw(), rng));
    ++x.iteration;
    return std::pair{std::move(paths), std::move(x)};
  };
  suite.instance_rules.emplace(
      "simulate", InstanceRule<GridPathTraits>{"simulate", FpwFn<GridPathTraits>([](const S& s, Rng&) {
                                                 std::vector<double> tau =
                                                     s.has_fpw() ? s.fpw()
                                                                 : std::vector<double>(s.prob().graph.edges.size(), 0.0);
                                                 for (const auto& path : s.sols()) {
                                                   const double deposit = 1.0 / path_cost(s.prob(), path);
                                                   for (auto e : path) tau[e] += deposit;
                                                 }
                                                 return std::pair{std::move(tau), s.extra()};
                                               })});
  suite.evaluate_premise = "simulate";
  suite.beval = [](const S& s, Rng&) {
    // Densest-pheromone path, ties to the lowest edge id.
    const auto& p = s.prob();
    const auto& tau = s.fpw();
    EdgePath path;
    for (std::size_t v = p.source; v != p.sink;) {
      std::size_t chosen = p.out[v].front();
      for (auto e : p.out[v]) {
        if (tau[e] > tau[chosen]) chosen = e;
      }
      path.push_back(chosen);
      v = p.graph.edges[chosen].to;
    }
    return std::pair{std::move(path), s.extra()};
  };
  suite.stop = [](const S& s) { return s.extra().iteration >= s.extra().params.max_iterations; };
  return suite;
}

double sphere(const std::vector<double>& x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

FunctionSuite<SphereTraits> sphere_pso_suite(const SphereParams& params) {
  using S = State<SphereTraits>;
  if (params.dim < 1) throw ValidationError("sphere: dimension must be at least 1");
  if (params.particles < 1) throw ValidationError("sphere: at least one particle is required");
  if (params.initial) {
    if (params.initial->size() != params.particles) throw ValidationError("sphere: initial positions: wrong count");
    for (const auto& x : *params.initial) {
      if (x.size() != params.dim) throw ValidationError("sphere: initial position has wrong dimension");
    }
  }
  FunctionSuite<SphereTraits> suite;
  suite.init = [](const SphereParams& p) { return SphereExtra{p, 0}; };
  suite.set_problem = [](const std::size_t& dim, const S& s, Rng&) {
    if (dim != s.extra().params.dim) throw ValidationError("sphere: problem dimension differs from the configured one");
    return std::pair{dim, s.extra()};
  };
  suite.generate = [](const S& s, Rng& rng) {
    const auto& p = s.extra().params;
    std::vector<SphereParticle> swarm;
    for (std::size_t k = 0; k < p.particles; ++k) {
      SphereParticle part{std::vector<double>(p.dim), std::vector<double>(p.dim, 0.0)};
      if (p.initial) {
        part.x = (*p.initial)[k];
      } else {
        for (auto& xi : part.x) xi = rng.uniform(-p.init_range, p.init_range);
      }
      swarm.push_back(std::move(part));
    }
    return std::pair{std::move(swarm), s.extra()};
  };
  suite.aeval = [](const S& s, Rng&) {
    const auto& swarm = s.sols();
    std::vector<PersonalBest> pb;
    if (s.has_fpw()) pb = s.fpw();
    pb.resize(swarm.size(), PersonalBest{{}, INFINITY});
    for (std::size_t k = 0; k < swarm.size(); ++k) {
      const double f = sphere(swarm[k].x);
      if (f < pb[k].value) pb[k] = PersonalBest{swarm[k].x, f};
    }
    return std::pair{std::move(pb), s.extra()};
  };
  suite.beval = [](const S& s, Rng&) {
    const auto& pb = s.fpw();
    std::size_t at = 0;
    for (std::size_t k = 1; k < pb.size(); ++k) {
      if (pb[k].value < pb[at].value) at = k;
    }
    if (s.has_best() && sphere(s.best().x) <= pb[at].value) return std::pair{s.best(), s.extra()};
    return std::pair{SphereParticle{pb[at].x, s.sols()[at].v}, s.extra()};
  };
  suite.stop = [](const S& s) { return s.extra().iteration >= s.extra().params.max_iterations; };
  suite.instance_rules.emplace(
      "divert", InstanceRule<SphereTraits>{"divert", SolsFn<SphereTraits>([](const S& s, Rng& rng) {
                                             auto swarm = s.sols();
                                             const auto& p = s.extra().params;
                                             for (auto& part : swarm) {
                                               for (auto& vi : part.v) vi = p.inertia * vi + p.noise * rng.uniform(-1, 1);
                                             }
                                             return std::pair{std::move(swarm), s.extra()};
                                           })});
  suite.instance_rules.emplace(
      "aim", InstanceRule<SphereTraits>{"aim", SolsFn<SphereTraits>([](const S& s, Rng& rng) {
                                          auto swarm = s.sols();
                                          const auto& p = s.extra().params;
                                          const auto& pb = s.fpw();
                                          const auto& g = s.best().x;
                                          for (std::size_t k = 0; k < swarm.size(); ++k) {
                                            auto& part = swarm[k];
                                            for (std::size_t d = 0; d < part.x.size(); ++d) {
                                              part.v[d] += p.cognitive * rng.uniform01() * (pb[k].x[d] - part.x[d]) +
                                                           p.social * rng.uniform01() * (g[d] - part.x[d]);
                                            }
                                          }
                                          return std::pair{std::move(swarm), s.extra()};
                                        })});
  suite.instance_rules.emplace(
      "move", InstanceRule<SphereTraits>{"move", SolsFn<SphereTraits>([](const S& s, Rng&) {
                                           auto swarm = s.sols();
                                           SphereExtra x = s.extra();
                                           for (auto& part : swarm) {
                                             for (std::size_t d = 0; d < part.x.size(); ++d) part.x[d] += part.v[d];
                                           }
                                           ++x.iteration;
                                           return std::pair{std::move(swarm), std::move(x)};
                                         })});
  suite.next_gen_expansion =
      Statement::chain({Statement::instance("divert"), Statement::instance("aim"), Statement::instance("move")});
  return suite;
}

}  // namespace slsvm::demo
