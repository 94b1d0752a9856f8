#include "pcgraph/parallel.hpp"
#include "pcgraph/solver.hpp"

namespace pcgraph {

OnlineSpice::OnlineSpice(Index nodes, SolverConfig cfg, int threads)
    : cfg_(cfg), threads_(threads), stats_(SuffStats::zeros(nodes)) {
  cfg_.validate();
  if (nodes < 2) {
    throw Error(ErrorCode::TooFewNodes, "online learner needs at least 2 nodes");
  }
  states_.resize(static_cast<std::size_t>(nodes));
  for (Index i = 0; i < nodes; ++i) {
    auto& s = states_[static_cast<std::size_t>(i)];
    s.node = i;
    s.weights = Vector::Zero(nodes - 1);
  }
}

void OnlineSpice::update(const Eigen::Ref<const Vector>& x) {
  stats_.add_sample(x);
  parallel_for(stats_.nodes(), threads_, [&](std::ptrdiff_t i) {
    auto& state = states_[static_cast<std::size_t>(i)];
    state = spice_solve_node(stats_, i, cfg_, state.weights);
  });
}

WeightedGraph OnlineSpice::graph() const {
  return assemble_graph(states_, stats_.nodes());
}

}  // namespace pcgraph
