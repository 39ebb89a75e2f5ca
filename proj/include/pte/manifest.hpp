#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pte/trainer.hpp"

namespace pte {

/// FNV-1a 64-bit digest of a file's bytes, as a hex string.
inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot digest missing file: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

struct InputFile {
  std::string path;
  std::string digest;
};

/// Resolved configuration and provenance of one run; re-running a manifest in
/// single-threaded mode reproduces the outputs bit-exactly.
struct RunManifest {
  std::string command;
  TrainConfig config;
  std::map<std::string, InputFile> inputs;  // role ("vocab", "ww", ...) -> file
  std::vector<std::string> outputs;
  std::map<std::string, double> timings_ms;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    nlohmann::json c;
    c["dim"] = config.dim;
    c["samples"] = config.samples;
    if (config.finetune_samples) c["finetune_samples"] = *config.finetune_samples;
    c["negatives"] = config.negatives;
    c["rate"] = config.initial_rate;
    c["window"] = config.window;
    c["mode"] = mode_tag(config.mode);
    c["nets"] = config.subset.to_string();
    c["threads"] = config.threads;
    c["seed"] = config.seed;
    c["noise_power"] = config.noise_power;
    j["config"] = c;
    nlohmann::json in = nlohmann::json::object();
    for (const auto& [role, file] : inputs)
      in[role] = {{"path", file.path}, {"digest", file.digest}};
    j["inputs"] = in;
    j["outputs"] = outputs;
    j["timings_ms"] = timings_ms;
    return j;
  }

  static RunManifest from_json(const nlohmann::json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    const auto& c = j.at("config");
    m.config.dim = c.at("dim").get<std::size_t>();
    m.config.samples = c.at("samples").get<std::uint64_t>();
    if (c.contains("finetune_samples"))
      m.config.finetune_samples = c.at("finetune_samples").get<std::uint64_t>();
    m.config.negatives = c.at("negatives").get<int>();
    m.config.initial_rate = c.at("rate").get<float>();
    m.config.window = c.at("window").get<int>();
    auto mode = parse_mode(c.at("mode").get<std::string>());
    if (!mode) throw std::runtime_error("manifest: unknown training mode");
    m.config.mode = *mode;
    m.config.subset = NetworkSubset::parse(c.at("nets").get<std::string>());
    m.config.threads = c.at("threads").get<int>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.noise_power = c.at("noise_power").get<double>();
    for (const auto& [role, file] : j.at("inputs").items())
      m.inputs[role] = {file.at("path").get<std::string>(),
                        file.at("digest").get<std::string>()};
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (j.contains("timings_ms"))
      m.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
    return m;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << to_json().dump(2) << '\n';
  }

  static RunManifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }
};

}  // namespace pte
