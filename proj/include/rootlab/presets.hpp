#pragma once

// Model settings for the published-table experiments.  The library defaults
// in ModelSpec stay general; these pin the configurations the table runs use.

#include "rootlab/model.hpp"

namespace rootlab::presets {

// Multi-family screening on raw quintic coefficients (3 seeds).
inline ModelSpec screening(ModelFamily family) {
  ModelSpec s = ModelSpec::of(family);
  s.tree.max_depth = 6;
  s.forest.n_trees = 300;
  s.forest.max_depth = 8;
  s.gbm.n_rounds = 100;
  s.mlp.hidden = {16, 16};
  return s;
}

// Neural network vs decision tree comparisons (20 seeds), the feature
// ablation and the distillation teacher.
inline ModelSpec comparison(ModelFamily family) {
  ModelSpec s = ModelSpec::of(family);
  s.tree.max_depth = 8;
  s.mlp.hidden = {16, 16};
  return s;
}

}  // namespace rootlab::presets
