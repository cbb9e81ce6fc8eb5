#include "core/instance_json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dsi {

using nlohmann::json;

DiscreteInstance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance parse error: ") + e.what());
  }
  try {
    const std::size_t nx = doc.at("source_alphabet").get<std::size_t>();
    const std::size_t nxh = doc.at("recon_alphabet").get<std::size_t>();
    const std::size_t nq = doc.at("side_alphabet").get<std::size_t>();
    auto px = doc.at("p_x").get<std::vector<double>>();
    auto pq = doc.at("p_q").get<std::vector<double>>();
    if (px.size() != nx || pq.size() != nq) {
      throw std::invalid_argument("instance: law lengths disagree with alphabet sizes");
    }
    const auto& d = doc.at("dist");
    if (d.size() != nx) throw std::invalid_argument("instance: dist outer size != source_alphabet");
    DistortionTensor t(nx, nxh, nq);
    for (std::size_t x = 0; x < nx; ++x) {
      if (d[x].size() != nxh) throw std::invalid_argument("instance: dist middle size != recon_alphabet");
      for (std::size_t xh = 0; xh < nxh; ++xh) {
        if (d[x][xh].size() != nq) throw std::invalid_argument("instance: dist inner size != side_alphabet");
        for (std::size_t q = 0; q < nq; ++q) {
          t.at(x, xh, q) = d[x][xh][q].get<double>();
        }
      }
    }
    return DiscreteInstance(std::move(px), std::move(pq), std::move(t));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance schema error: ") + e.what());
  }
}

std::string instance_to_json(const DiscreteInstance& instance) {
  json doc;
  doc["source_alphabet"] = instance.source_size();
  doc["recon_alphabet"] = instance.recon_size();
  doc["side_alphabet"] = instance.side_size();
  doc["p_x"] = instance.source_law();
  doc["p_q"] = instance.side_law();
  json dist = json::array();
  for (std::size_t x = 0; x < instance.source_size(); ++x) {
    json mid = json::array();
    for (std::size_t xh = 0; xh < instance.recon_size(); ++xh) {
      json inner = json::array();
      for (std::size_t q = 0; q < instance.side_size(); ++q) {
        inner.push_back(instance.d(x, xh, q));
      }
      mid.push_back(std::move(inner));
    }
    dist.push_back(std::move(mid));
  }
  doc["dist"] = std::move(dist);
  return doc.dump(2);
}

DiscreteInstance instance_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace dsi
