#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kore/augment/gen_client.hpp"
#include "kore/rng.hpp"

namespace kore {

enum class KnowledgeKind { news, entity };

struct EmbeddedImage {
  std::string id;
  std::vector<double> embedding;
};

struct KnowledgeItem {
  std::string id;
  KnowledgeKind kind = KnowledgeKind::news;
  std::string fine_type;      // e.g. politics, film
  std::string title_or_name;  // news title or entity name
  std::string text;
  std::vector<std::string> image_refs;
  std::vector<double> original_embedding;
  std::vector<EmbeddedImage> candidate_images;
};

enum class TaskKind { dialogue, recognition, caption, vqa };

std::string task_name(TaskKind t);

enum class Role { human, assistant };

struct Turn {
  Role role;
  std::string text;
};

struct AugmentedSample {
  std::string id;
  TaskKind task = TaskKind::dialogue;
  std::string image;
  std::vector<Turn> turns;  // alternating human/assistant
  std::string instruction_suffix;
};

struct Quadruplet {
  std::string q;
  std::string a;
  std::string s;  // subject named in the question; must differ from the answer
  std::string h;  // the subject's hypernym
};

/// Skip/warn log of the pipeline; one entry per dropped sample or warning.
struct PipelineLog {
  struct Entry {
    std::string item_id;
    std::string stage;
    std::string reason;
  };
  std::vector<Entry> entries;

  void add(std::string item_id, std::string stage, std::string reason) {
    entries.push_back({std::move(item_id), std::move(stage), std::move(reason)});
  }
};

struct ImagePick {
  std::string recognition;
  std::string caption;
};

/// Ranks candidates by cosine similarity against the original embedding,
/// drops identical matches (similarity >= 1 - 1e-9), and returns the top
/// two survivors (ties by lowest candidate index). nullopt when fewer than
/// two survive or fewer than three candidates exist.
std::optional<ImagePick> select_images(const KnowledgeItem& item, PipelineLog* log = nullptr);

/// Multi-round dialogue: a heuristic QA first turn from the template bank,
/// then client-generated questions (capped at 10) each answered by a
/// second client call. Throws ClientError through from the client.
/// `seeded_templates` pins every bank draw to index 0 when false.
AugmentedSample build_dialogue(const KnowledgeItem& item, GenClient& client, Rng& rng,
                               bool seeded_templates = true);

AugmentedSample build_recognition(const KnowledgeItem& item, const std::string& image,
                                  Rng& rng, bool seeded_templates = true);

AugmentedSample build_caption(const KnowledgeItem& item, GenClient& client,
                              const std::string& image, Rng& rng,
                              PipelineLog* log = nullptr, bool seeded_templates = true);

/// Parses quadruplet lines "question<TAB>answer<TAB>subject<TAB>hypernym".
/// Violating quadruplets (answer longer than 8 tokens, subject equal to
/// the answer, empty fields) are dropped with a log entry; at most 5 are
/// kept. The image identifier is the search keyword "subject hypernym".
std::vector<AugmentedSample> build_vqa(const KnowledgeItem& item, GenClient& client,
                                       Rng& rng, PipelineLog* log = nullptr,
                                       bool seeded_templates = true);

struct AugmentOptions {
  std::uint64_t seed = 0;
  /// When false, every template and prompt-variant draw is pinned to the
  /// first bank entry instead of a seeded choice (debugging aid).
  bool templates = true;
};

/// Runs all four builders over the corpus. Items are processed with
/// per-item sub-seeds derived from (seed, item id) and emitted in
/// ascending item-id order, tasks ordered dialogue, recognition, caption,
/// vqa within an item. Client failures skip the affected sample.
std::vector<AugmentedSample> augment_corpus(std::span<const KnowledgeItem> items,
                                            GenClient& client, const AugmentOptions& opt,
                                            PipelineLog* log = nullptr);

/// One JSON object per line:
/// {"id","task","image","conversations":[{"from","value"}...]} with stable
/// field order. Returns the number of lines written.
std::size_t emit_dataset(std::span<const AugmentedSample> samples,
                         const std::filesystem::path& path);

std::vector<KnowledgeItem> load_knowledge(const std::filesystem::path& path);

}  // namespace kore
