#include "render.hpp"

namespace bovw {

GrayImage render_layout(const Layout& layout, const Codebook& cb) {
  const SamplingSpec& spec = layout.sampling;
  if (spec.patch_size != cb.patch_size)
    throw InvalidInput("codebook patch size does not match layout sampling");
  if (static_cast<int>(layout.labels.size()) != spec.cell_count())
    throw InvalidInput("layout label count does not match grid");
  for (int label : layout.labels)
    if (label < 0 || label >= cb.k) throw InvalidInput("layout label out of range");

  const int w = spec.image_width(), h = spec.image_height(), ps = spec.patch_size;
  std::vector<double> accum(static_cast<std::size_t>(w) * h, 0.0);
  std::vector<std::uint32_t> weight(accum.size(), 0);
  for (int row = 0; row < spec.grid_h; ++row) {
    for (int col = 0; col < spec.grid_w; ++col) {
      const auto& patch = cb.mean_patches[layout.labels[row * spec.grid_w + col]];
      int ox = col * spec.stride, oy = row * spec.stride;
      for (int y = 0; y < ps; ++y) {
        std::size_t base = static_cast<std::size_t>(oy + y) * w + ox;
        const float* src = patch.data() + static_cast<std::size_t>(y) * ps;
        for (int x = 0; x < ps; ++x) {
          accum[base + x] += src[x];
          ++weight[base + x];
        }
      }
    }
  }
  GrayImage out(w, h);
  for (std::size_t i = 0; i < accum.size(); ++i)
    out.pixels[i] = weight[i] ? static_cast<float>(accum[i] / weight[i]) : 0.5f;
  return out;
}

}  // namespace bovw
