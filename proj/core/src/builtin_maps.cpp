#include "lorenzlab/builtin_maps.hpp"

#include <cstdio>

namespace lorenzlab {

LorenzMapSpec quadratic_pair(double a_left, double a_right) {
  LorenzMapSpec spec;
  spec.c = 0.5;
  spec.left = BranchSpec::logistic(BranchSide::left, a_left);
  spec.right = BranchSpec::logistic(BranchSide::right, a_right);
  char buf[64];
  std::snprintf(buf, sizeof buf, "quadratic-pair(%g,%g)", a_left, a_right);
  spec.name = buf;
  return spec;
}

std::optional<LorenzMapSpec> builtin_map(std::string_view name) {
  if (name == "paper-example") {
    auto spec = quadratic_pair(3.4, 4.0);
    spec.name = "paper-example";
    return spec;
  }
  if (name == "logistic4-embed") {
    auto spec = embed_unimodal(UnimodalSpec::logistic(4.0));
    spec.name = "logistic4-embed";
    return spec;
  }
  if (name == "logistic3.4-embed") {
    auto spec = embed_unimodal(UnimodalSpec::logistic(3.4));
    spec.name = "logistic3.4-embed";
    return spec;
  }
  return std::nullopt;
}

std::vector<std::string> builtin_names() {
  return {"paper-example", "logistic4-embed", "logistic3.4-embed"};
}

}  // namespace lorenzlab
