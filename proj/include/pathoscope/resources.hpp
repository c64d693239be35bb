#pragma once

#include <string_view>

// Raw JSON documents compiled into the library from data/.
namespace pathoscope::resources {

std::string_view appendix_b_json();
std::string_view figure1_series_json();
std::string_view table6_counts_json();
std::string_view default_mapping_json();
std::string_view default_convention_json();

}  // namespace pathoscope::resources
