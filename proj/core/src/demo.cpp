#include "kore/demo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "json.hpp"

#include "kore/augment/augment.hpp"
#include "kore/augment/templates.hpp"
#include "kore/dataset.hpp"
#include "kore/matrix.hpp"
#include "kore/model.hpp"
#include "kore/rng.hpp"

namespace kore {

namespace {

namespace tpl = kore::templates;

bool in_bank(std::span<const std::string_view> bank, const std::string& text) {
  return std::find(bank.begin(), bank.end(), text) != bank.end();
}

std::string hex4(std::uint64_t v) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%04llx", static_cast<unsigned long long>(v & 0xffff));
  return std::string(buf);
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.next_gaussian();
  return m;
}

// Orthonormal columns via Gram-Schmidt over seeded Gaussian draws.
Matrix random_orthonormal(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix q(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> v(rows);
    for (auto& x : v) x = rng.next_gaussian();
    for (int round = 0; round < 2; ++round) {
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < rows; ++i) dot += v[i] * q(i, k);
        for (std::size_t i = 0; i < rows; ++i) v[i] -= dot * q(i, k);
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < rows; ++i) q(i, j) = v[i] / norm;
  }
  return q;
}

}  // namespace

std::string SynthGenClient::complete(const GenRequest& req) {
  const std::uint64_t key = request_key(req);

  if (in_bank(tpl::question_gen_system(), req.system_prompt)) {
    // 6..8 questions; with the heuristic turn that lands the mean rounds
    // per dialogue inside the 7..9 band.
    const std::size_t n = 6 + key % 3;
    std::string out;
    for (std::size_t i = 1; i <= n; ++i) {
      out += "What does recorded detail " + std::to_string(i) + " of this account describe?\n";
    }
    return out;
  }
  if (in_bank(tpl::answer_gen_system(), req.system_prompt)) {
    return "It is documented as outcome " + hex4(key) + " in the account.";
  }
  if (in_bank(tpl::summary_system(), req.system_prompt)) {
    return "A compact record of the event, reference " + hex4(key) +
           ", preserved for quick lookup.";
  }
  if (in_bank(tpl::quadruplet_system(), req.system_prompt)) {
    std::string out;
    for (std::size_t i = 1; i <= 5; ++i) {
      const std::string ref = hex4(key + i);
      out += "Which role did figure F" + std::to_string(i) + " (ref " + ref +
             ") play in the account?\tOutcome-" + ref + "\tFigure F" + std::to_string(i) +
             "\tPerson\n";
    }
    return out;
  }
  throw ClientError("synth client: unrecognized system prompt");
}

RecordingGenClient::RecordingGenClient(std::filesystem::path stub_dir)
    : dir_(std::move(stub_dir)) {
  std::filesystem::create_directories(dir_);
}

std::string RecordingGenClient::complete(const GenRequest& req) {
  const std::string response = synth_.complete(req);
  std::ofstream out(dir_ / (request_key_hex(req) + ".txt"), std::ios::binary);
  if (!out) throw Error("recording client: cannot write stub file");
  out << response;
  return response;
}

void write_demo_fixture(const std::filesystem::path& dir, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  // ----- toy model: 8 -> 8 -> 8, identity activations, no bias -----
  Rng rng(seed);
  ToyModel model;
  model.input_dim = 8;
  for (int li = 0; li < 2; ++li) {
    LinearLayer layer;
    layer.layer_id = "layer" + std::to_string(li);
    layer.w = random_matrix(rng, 8, 8, 0.5);
    layer.activation = Activation::identity;
    model.layers.push_back(std::move(layer));
  }
  model.validate();
  save_checkpoint(model, dir / "checkpoint");

  // ----- capture data: activations confined to a 5-dim subspace -----
  const Matrix basis_old = random_orthonormal(rng, 8, 5);
  std::vector<Matrix> capture_inputs;
  for (int b = 0; b < 4; ++b) {
    capture_inputs.push_back(matmul(basis_old, random_matrix(rng, 5, 16)));
  }
  save_inputs(capture_inputs, dir / "capture.jsonl");

  // ----- training data: targets offset from the base outputs -----
  std::vector<TrainSample> train_samples;
  for (int s = 0; s < 8; ++s) {
    const Matrix x = random_matrix(rng, 8, 4);
    Matrix y = forward(model, x);
    for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] += 0.1 * rng.next_gaussian();
    train_samples.push_back(TrainSample{x, y});
  }
  save_dataset(train_samples, dir / "train.jsonl");

  nlohmann::ordered_json train_cfg;
  train_cfg["base_lr"] = 1e-4;
  train_cfg["warmup_ratio"] = 0.03;
  train_cfg["epochs"] = 6;
  train_cfg["batch_size"] = 4;
  train_cfg["seed"] = seed;
  train_cfg["loss"] = "mse";
  train_cfg["weight_decay"] = 0.0;
  {
    std::ofstream out(dir / "train_config.json");
    out << train_cfg.dump(2) << "\n";
  }

  // ----- knowledge corpus: 20 items, half news, half entity -----
  const char* fine_types[4] = {"politics", "film", "sports", "science"};
  std::vector<KnowledgeItem> items;
  for (int n = 1; n <= 20; ++n) {
    KnowledgeItem item;
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "item-%03d", n);
    item.id = idbuf;
    item.kind = n % 2 == 1 ? KnowledgeKind::news : KnowledgeKind::entity;
    item.fine_type = fine_types[n % 4];
    item.title_or_name = (item.kind == KnowledgeKind::news ? "Demo Event " : "Demo Figure ") +
                         std::to_string(n);
    item.text = item.title_or_name +
                " was documented in a short synthetic account numbered " +
                std::to_string(n) +
                ". The account lists several recorded details, the people involved, "
                "and the documented outcomes for later reference.";
    item.image_refs.push_back("orig-" + std::to_string(n));

    Rng erng(derive_seed(seed, item.id + "/embeddings"));
    item.original_embedding.resize(4);
    for (auto& v : item.original_embedding) v = erng.next_gaussian();
    // Candidate 0 is an exact copy of the original, so the identical-match
    // exclusion rule is exercised on every item.
    item.candidate_images.push_back({"cand-" + std::to_string(n) + "-0",
                                     item.original_embedding});
    for (int c = 1; c < 4; ++c) {
      EmbeddedImage img;
      img.id = "cand-" + std::to_string(n) + "-" + std::to_string(c);
      img.embedding.resize(4);
      for (auto& v : img.embedding) v = erng.next_gaussian();
      item.candidate_images.push_back(std::move(img));
    }
    items.push_back(std::move(item));
  }
  {
    std::ofstream out(dir / "knowledge.jsonl", std::ios::binary);
    for (const auto& item : items) {
      nlohmann::ordered_json j;
      j["id"] = item.id;
      j["kind"] = item.kind == KnowledgeKind::news ? "news" : "entity";
      j["fine_type"] = item.fine_type;
      j["title_or_name"] = item.title_or_name;
      j["text"] = item.text;
      j["image_refs"] = item.image_refs;
      j["original_embedding"] = item.original_embedding;
      j["candidate_images"] = nlohmann::ordered_json::array();
      for (const auto& img : item.candidate_images) {
        j["candidate_images"].push_back({{"id", img.id}, {"embedding", img.embedding}});
      }
      out << j.dump() << "\n";
    }
  }

  // ----- canned stub responses for the augment run -----
  RecordingGenClient recorder(dir / "stub");
  AugmentOptions opt;
  opt.seed = seed;
  augment_corpus(items, recorder, opt);

  // ----- eval fixture: half the predictions contain the gold answer -----
  {
    std::ofstream pred(dir / "eval_pred.jsonl", std::ios::binary);
    std::ofstream gold(dir / "eval_gold.jsonl", std::ios::binary);
    for (int q = 1; q <= 12; ++q) {
      const std::string gold_text = "answer token " + std::to_string(q);
      const std::string pred_text =
          q % 2 == 0 ? "The record states it was Answer Token " + std::to_string(q) + "."
                     : "An unrelated reply about item " + std::to_string(100 + q) + ".";
      nlohmann::ordered_json pj{{"id", "q" + std::to_string(q)}, {"text", pred_text}};
      nlohmann::ordered_json gj{{"id", "q" + std::to_string(q)}, {"text", gold_text}};
      pred << pj.dump() << "\n";
      gold << gj.dump() << "\n";
    }
  }
}

}  // namespace kore
