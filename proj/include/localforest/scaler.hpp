#pragma once

#include <vector>

namespace lf {

// Per-feature affine map between original units and the model's internal
// axis. Scaled features map [data_min, data_max] onto [-1, 1]; exempt
// features (one-hot members) pass through unchanged.
struct FeatureScale {
  bool scaled = true;
  double data_min = 0.0;
  double data_max = 1.0;  // > data_min when scaled
};

struct ScalerState {
  std::vector<FeatureScale> features;

  // Original units -> internal axis.
  double transform(int feature, double value) const {
    const FeatureScale& s = features[feature];
    if (!s.scaled) return value;
    return -1.0 + 2.0 * (value - s.data_min) / (s.data_max - s.data_min);
  }

  // Internal axis -> original units; inverse of transform up to rounding.
  double inverse(int feature, double value) const {
    const FeatureScale& s = features[feature];
    if (!s.scaled) return value;
    return s.data_min + (value + 1.0) * (s.data_max - s.data_min) / 2.0;
  }
};

}  // namespace lf
