#pragma once

#include "vsrsynth/frame.hpp"

namespace vsrsynth {

/// Baseline JPEG encode + decode at `quality` (1..100). Chroma is 4:2:0
/// below quality 90 and 4:4:4 from 90 up. Integer DCT both ways, so the
/// result is deterministic for a given libjpeg build.
Frame jpeg_cycle(const Frame& frame, int quality);

}  // namespace vsrsynth
