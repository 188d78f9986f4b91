#include "socs/region_graph.hpp"

#include <functional>

#include "socs/errors.hpp"
#include "socs/rng.hpp"

namespace socs {

std::uint64_t RegionGraph::structure_hash() const {
  std::function<std::uint64_t(int)> h = [&](int id) -> std::uint64_t {
    const Node& n = nodes_[id];
    std::uint64_t acc = 0xcbf29ce484222325ULL;
    auto mix = [&acc](std::uint64_t v) {
      acc ^= v + 0x9e3779b97f4a7c15ULL + (acc << 6) + (acc >> 2);
    };
    mix(Scope::Hash{}(n.scope));
    if (!n.is_leaf()) {
      mix(h(n.left));
      mix(h(n.right));
    }
    return acc;
  };
  return h(root_);
}

RegionGraph RegionGraph::random_binary_tree(int num_vars, std::uint64_t seed) {
  if (num_vars < 1) throw ConfigError("region graph needs at least one variable");
  RegionGraph rg;
  rg.num_vars_ = num_vars;
  std::vector<int> order(num_vars);
  for (int i = 0; i < num_vars; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  std::function<int(int, int)> split = [&](int lo, int hi) -> int {
    Scope s(num_vars);
    for (int i = lo; i < hi; ++i) s.add(order[i]);
    Node n;
    n.scope = s;
    if (hi - lo > 1) {
      const int mid = lo + (hi - lo + 1) / 2;  // extra variable goes left
      n.left = split(lo, mid);
      n.right = split(mid, hi);
    }
    return rg.add_node(std::move(n));
  };
  rg.root_ = split(0, num_vars);
  return rg;
}

RegionGraph RegionGraph::quad_tree(int height, int width, int channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw ConfigError("quad tree needs positive image dimensions");
  }
  RegionGraph rg;
  rg.num_vars_ = height * width * channels;

  auto patch_scope = [&](int r0, int r1, int c0, int c1) {
    Scope s(rg.num_vars_);
    for (int i = r0; i < r1; ++i) {
      for (int j = c0; j < c1; ++j) {
        for (int k = 0; k < channels; ++k) s.add((i * width + j) * channels + k);
      }
    }
    return s;
  };

  // Channel chain below a single pixel.
  std::function<int(int, int, int, int)> chans = [&](int pix_r, int pix_c, int k0,
                                                     int k1) -> int {
    Scope s(rg.num_vars_);
    for (int k = k0; k < k1; ++k) s.add((pix_r * width + pix_c) * channels + k);
    Node n;
    n.scope = s;
    if (k1 - k0 > 1) {
      const int mid = k0 + (k1 - k0 + 1) / 2;
      n.left = chans(pix_r, pix_c, k0, mid);
      n.right = chans(pix_r, pix_c, mid, k1);
    }
    return rg.add_node(std::move(n));
  };

  std::function<int(int, int, int, int)> vsplit;
  std::function<int(int, int, int, int)> patch = [&](int r0, int r1, int c0, int c1) -> int {
    if (r1 - r0 == 1 && c1 - c0 == 1) return chans(r0, c0, 0, channels);
    if (r1 - r0 > 1) {
      // horizontal cut, then each strip cuts vertically
      const int rm = r0 + (r1 - r0 + 1) / 2;
      Node n;
      n.scope = patch_scope(r0, r1, c0, c1);
      n.left = vsplit(r0, rm, c0, c1);
      n.right = vsplit(rm, r1, c0, c1);
      return rg.add_node(std::move(n));
    }
    return vsplit(r0, r1, c0, c1);
  };
  vsplit = [&](int r0, int r1, int c0, int c1) -> int {
    if (c1 - c0 > 1) {
      const int cm = c0 + (c1 - c0 + 1) / 2;
      Node n;
      n.scope = patch_scope(r0, r1, c0, c1);
      n.left = patch(r0, r1, c0, cm);
      n.right = patch(r0, r1, cm, c1);
      return rg.add_node(std::move(n));
    }
    return patch(r0, r1, c0, c1);
  };

  rg.root_ = patch(0, height, 0, width);
  return rg;
}

}  // namespace socs
