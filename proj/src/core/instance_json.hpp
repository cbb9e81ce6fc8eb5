#pragma once

#include <string>

#include "core/prob.hpp"

namespace dsi {

// Text form of a DiscreteInstance:
//   {
//     "source_alphabet": 2, "recon_alphabet": 2, "side_alphabet": 2,
//     "p_x": [0.5, 0.5], "p_q": [0.5, 0.5],
//     "dist": [[[d(0,0,0), d(0,0,1)], [d(0,1,0), d(0,1,1)]], ...]
//   }
// dist is nested as dist[x][xhat][q].
DiscreteInstance instance_from_json(const std::string& text);
std::string instance_to_json(const DiscreteInstance& instance);

DiscreteInstance instance_from_file(const std::string& path);

}  // namespace dsi
