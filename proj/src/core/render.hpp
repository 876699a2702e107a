#pragma once

#include "qap.hpp"

namespace bovw {

// Additive synthesis: each cell's mean patch is accumulated at its pixel
// anchor, then every pixel is divided by its coverage count. Pixels no patch
// reaches are set to 0.5. Output size is (grid-1)*stride + patch_size per
// axis.
GrayImage render_layout(const Layout& layout, const Codebook& cb);

}  // namespace bovw
