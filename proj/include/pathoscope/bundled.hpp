#pragma once

// Canonical datasets compiled into the library.
//
//   appendix_b      41 retained speech segments with all five channels.
//   figure1_series  51-point Gemini valence / e2v arousal, 46 Pathos markers.
//   table6_counts   EMO-DB speaker x emotion counts (535 utterances).
//
// Every loader re-checks the dataset's invariants and throws IntegrityError
// naming the first one that fails.

#include <string_view>
#include <variant>
#include <vector>

#include "pathoscope/core.hpp"

namespace pathoscope {

using BundledDataset = std::variant<std::vector<SegmentRecord>, Figure1Series, SpeakerEmotionMatrix>;

// name is one of "appendix_b", "figure1_series", "table6_counts"; anything
// else is an InputError.
BundledDataset load_bundled_dataset(std::string_view name);

std::vector<SegmentRecord> bundled_appendix_b();
Figure1Series bundled_figure1_series();
SpeakerEmotionMatrix bundled_table6_counts();

// Parsers behind the loaders, exposed so corrupted bundles can be tested.
std::vector<SegmentRecord> parse_appendix_b_bundle(std::string_view json_text);
Figure1Series parse_figure1_bundle(std::string_view json_text);
SpeakerEmotionMatrix parse_table6_bundle(std::string_view json_text);

}  // namespace pathoscope
