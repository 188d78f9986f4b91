#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "socs/scope.hpp"

namespace socs {

/// Rooted tree of scope partitions. Every internal node splits its scope into
/// the disjoint scopes of its two children; leaves are singletons. Circuits
/// parameterized on one region graph are structured-decomposable and
/// mutually compatible.
class RegionGraph {
public:
  struct Node {
    Scope scope;
    int left = -1;
    int right = -1;
    bool is_leaf() const { return left < 0; }
  };

  int root() const { return root_; }
  const Node& node(int i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  int num_vars() const { return num_vars_; }

  /// Stable digest of the tree shape and scopes; used to pin determinism.
  std::uint64_t structure_hash() const;

  /// Balanced random partition tree: variables are shuffled by `seed`, then
  /// recursively halved (odd splits give the extra variable to the left).
  static RegionGraph random_binary_tree(int num_vars, std::uint64_t seed);

  /// Image region graph: recursive four-way patch splits realized as a
  /// horizontal then a vertical binary split, down to single pixels; the
  /// channels of a pixel are grouped under that pixel's region. Variable
  /// index of pixel (i, j) channel k is (i * width + j) * channels + k.
  static RegionGraph quad_tree(int height, int width, int channels = 1);

private:
  int add_node(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  std::vector<Node> nodes_;
  int root_ = -1;
  int num_vars_ = 0;
};

using RegionGraphPtr = std::shared_ptr<const RegionGraph>;

}  // namespace socs
