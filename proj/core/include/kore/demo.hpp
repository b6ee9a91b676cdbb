#pragma once

#include <cstdint>
#include <filesystem>

#include "kore/augment/gen_client.hpp"

namespace kore {

constexpr std::uint64_t kDemoSeed = 7;

/// Deterministic text synthesizer: every response is a pure function of
/// the request bytes. Classifies prompts against the known banks and emits
/// parseable question lists, answers, summaries, and quadruplet lines.
class SynthGenClient : public GenClient {
 public:
  std::string complete(const GenRequest& req) override;
};

/// SynthGenClient that also records each response as a canned stub file,
/// so later runs can replay it with StubDirClient.
class RecordingGenClient : public GenClient {
 public:
  explicit RecordingGenClient(std::filesystem::path stub_dir);
  std::string complete(const GenRequest& req) override;

 private:
  std::filesystem::path dir_;
  SynthGenClient synth_;
};

/// Writes the self-contained demo fixture used by the CLI smoke run:
///   checkpoint/      2-layer toy model (8 -> 8 -> 8, identity)
///   capture.jsonl    activations confined to a 5-dim subspace
///   train.jsonl      new-task regression data
///   train_config.json
///   knowledge.jsonl  20 synthetic knowledge items
///   stub/            canned client responses for the augment run
///   eval_pred.jsonl / eval_gold.jsonl
void write_demo_fixture(const std::filesystem::path& dir, std::uint64_t seed = kDemoSeed);

}  // namespace kore
