#include "kore/augment/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "kore/augment/templates.hpp"

namespace kore {

namespace {

namespace tpl = kore::templates;

std::string trim(std::string_view s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return std::string(s.substr(lo, hi - lo));
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::size_t word_count(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

// Strips a leading "3. " / "3) " enumeration that live models like to add.
std::string strip_enumeration(std::string line) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == 0 || i >= line.size()) return line;
  if (line[i] != '.' && line[i] != ')') return line;
  ++i;
  while (i < line.size() && line[i] == ' ') ++i;
  return line.substr(i);
}

std::size_t pick(Rng& rng, std::size_t n, bool seeded) {
  return seeded ? rng.next_index(n) : 0;
}

std::map<std::string, std::string> item_vars(const KnowledgeItem& item) {
  std::map<std::string, std::string> vars;
  vars["type"] = item.fine_type;
  if (item.kind == KnowledgeKind::news) {
    vars["title"] = item.title_or_name;
  } else {
    vars["entity_name"] = item.title_or_name;
  }
  return vars;
}

std::string ascii_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

std::string task_name(TaskKind t) {
  switch (t) {
    case TaskKind::dialogue: return "dialogue";
    case TaskKind::recognition: return "recognition";
    case TaskKind::caption: return "caption";
    case TaskKind::vqa: return "vqa";
  }
  return "dialogue";
}

std::optional<ImagePick> select_images(const KnowledgeItem& item, PipelineLog* log) {
  if (item.candidate_images.size() < 3 || item.original_embedding.empty()) {
    if (log) {
      log->add(item.id, "select_images",
               "needs >= 3 candidate embeddings plus the original embedding");
    }
    return std::nullopt;
  }

  struct Ranked {
    double sim;
    std::size_t index;
  };
  std::vector<Ranked> survivors;
  for (std::size_t i = 0; i < item.candidate_images.size(); ++i) {
    const auto& cand = item.candidate_images[i];
    if (cand.embedding.size() != item.original_embedding.size()) {
      throw FormatError("select_images: embedding dimensions differ for item " + item.id);
    }
    const double sim = cosine_similarity(cand.embedding, item.original_embedding);
    if (sim >= 1.0 - 1e-9) continue;  // identical match, excluded
    survivors.push_back({sim, i});
  }
  std::stable_sort(survivors.begin(), survivors.end(), [](const Ranked& x, const Ranked& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    return x.index < y.index;
  });

  if (survivors.size() < 2) {
    if (log) log->add(item.id, "select_images", "fewer than 2 non-identical candidates");
    return std::nullopt;
  }
  return ImagePick{item.candidate_images[survivors[0].index].id,
                   item.candidate_images[survivors[1].index].id};
}

AugmentedSample build_dialogue(const KnowledgeItem& item, GenClient& client, Rng& rng,
                               bool seeded_templates) {
  if (item.text.empty()) throw ContractError("build_dialogue: item text is empty");
  if (item.image_refs.empty()) {
    throw ContractError("build_dialogue: item has no original image");
  }

  const bool news = item.kind == KnowledgeKind::news;
  const auto q_bank = news ? tpl::dialogue_question_news() : tpl::dialogue_question_entity();
  const auto a_bank = news ? tpl::dialogue_answer_news() : tpl::dialogue_answer_entity();
  const auto vars = item_vars(item);

  AugmentedSample sample;
  sample.id = item.id + "-dialogue";
  sample.task = TaskKind::dialogue;
  sample.image = item.image_refs.front();
  sample.turns.push_back({Role::human, tpl::fill(q_bank[pick(rng, q_bank.size(), seeded_templates)], vars)});
  sample.turns.push_back({Role::assistant, tpl::fill(a_bank[pick(rng, a_bank.size(), seeded_templates)], vars)});

  GenRequest qreq;
  qreq.system_prompt = std::string(
      tpl::question_gen_system()[pick(rng, tpl::question_gen_system().size(), seeded_templates)]);
  qreq.user_prompt = tpl::fill(
      tpl::question_gen_user()[pick(rng, tpl::question_gen_user().size(), seeded_templates)],
      {{"news", item.text}});

  std::vector<std::string> questions;
  for (const std::string& raw_line : split_lines(client.complete(qreq))) {
    const std::string line = trim(strip_enumeration(trim(raw_line)));
    if (line.empty()) continue;
    questions.push_back(line);
    if (questions.size() == 10) break;  // up-to-10 dialogue rounds
  }

  for (const std::string& question : questions) {
    GenRequest areq;
    areq.system_prompt = std::string(
        tpl::answer_gen_system()[pick(rng, tpl::answer_gen_system().size(), seeded_templates)]);
    areq.user_prompt = tpl::fill(
        tpl::answer_gen_user()[pick(rng, tpl::answer_gen_user().size(), seeded_templates)],
        {{"knowledge", item.text}, {"question", question}});
    const std::string answer = trim(client.complete(areq));
    sample.turns.push_back({Role::human, question});
    sample.turns.push_back({Role::assistant, answer});
  }
  return sample;
}

AugmentedSample build_recognition(const KnowledgeItem& item, const std::string& image,
                                  Rng& rng, bool seeded_templates) {
  const bool news = item.kind == KnowledgeKind::news;
  const auto bank = news ? tpl::recognition_news() : tpl::recognition_entity();

  AugmentedSample sample;
  sample.id = item.id + "-recognition";
  sample.task = TaskKind::recognition;
  sample.image = image;
  sample.instruction_suffix = std::string(tpl::recognition_instruction());
  const std::string stem =
      tpl::fill(bank[pick(rng, bank.size(), seeded_templates)], item_vars(item));
  sample.turns.push_back({Role::human, stem + " " + sample.instruction_suffix});
  sample.turns.push_back({Role::assistant, "Yes"});
  return sample;
}

AugmentedSample build_caption(const KnowledgeItem& item, GenClient& client,
                              const std::string& image, Rng& rng, PipelineLog* log,
                              bool seeded_templates) {
  const bool news = item.kind == KnowledgeKind::news;
  const auto bank = news ? tpl::caption_question_news() : tpl::caption_question_entity();

  AugmentedSample sample;
  sample.id = item.id + "-caption";
  sample.task = TaskKind::caption;
  sample.image = image;
  sample.instruction_suffix = std::string(tpl::caption_instruction());
  const std::string stem =
      tpl::fill(bank[pick(rng, bank.size(), seeded_templates)], item_vars(item));
  sample.turns.push_back({Role::human, stem + " " + sample.instruction_suffix});

  GenRequest sreq;
  sreq.system_prompt = std::string(
      tpl::summary_system()[pick(rng, tpl::summary_system().size(), seeded_templates)]);
  sreq.user_prompt =
      tpl::fill(tpl::summary_user()[pick(rng, tpl::summary_user().size(), seeded_templates)],
                {{"knowledge", item.text}});
  const std::string summary = trim(client.complete(sreq));
  if (word_count(summary) > 25 && log) {
    // The 25-word constraint binds the prompt; over-long stubs only warn.
    log->add(item.id, "caption", "summary exceeds 25 words (" +
                                     std::to_string(word_count(summary)) + ")");
  }

  auto vars = item_vars(item);
  vars["summary"] = summary;
  const std::string_view answer_tpl =
      news ? tpl::caption_answer_news() : tpl::caption_answer_entity();
  sample.turns.push_back({Role::assistant, tpl::fill(answer_tpl, vars)});
  return sample;
}

std::vector<AugmentedSample> build_vqa(const KnowledgeItem& item, GenClient& client,
                                       Rng& rng, PipelineLog* log, bool seeded_templates) {
  if (item.text.empty()) throw ContractError("build_vqa: item text is empty");

  GenRequest req;
  req.system_prompt = std::string(
      tpl::quadruplet_system()[pick(rng, tpl::quadruplet_system().size(), seeded_templates)]);
  req.user_prompt = tpl::fill(
      tpl::quadruplet_user()[pick(rng, tpl::quadruplet_user().size(), seeded_templates)],
      {{"knowledge", item.text}});
  const std::string response = client.complete(req);

  std::vector<Quadruplet> quads;
  for (const std::string& raw_line : split_lines(response)) {
    const std::string line = trim(raw_line);
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(trim(line.substr(start, tab - start)));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty() || fields[3].empty()) {
      if (log) log->add(item.id, "vqa", "unparseable quadruplet line");
      continue;
    }
    Quadruplet quad{fields[0], fields[1], fields[2], fields[3]};
    if (word_count(quad.a) > 8) {
      if (log) log->add(item.id, "vqa", "answer longer than 8 tokens: " + quad.a);
      continue;
    }
    if (ascii_lower(quad.s) == ascii_lower(quad.a)) {
      if (log) log->add(item.id, "vqa", "subject equals the answer: " + quad.s);
      continue;
    }
    if (quads.size() == 5) {
      if (log) log->add(item.id, "vqa", "more than 5 quadruplets; truncated");
      break;
    }
    quads.push_back(std::move(quad));
  }

  std::vector<AugmentedSample> samples;
  samples.reserve(quads.size());
  for (std::size_t i = 0; i < quads.size(); ++i) {
    const Quadruplet& quad = quads[i];
    AugmentedSample sample;
    sample.id = item.id + "-vqa-" + std::to_string(i);
    sample.task = TaskKind::vqa;
    sample.image = quad.s + " " + quad.h;  // the image search keyword
    sample.instruction_suffix = std::string(tpl::vqa_instruction());
    sample.turns.push_back({Role::human, quad.q + " " + sample.instruction_suffix});
    sample.turns.push_back({Role::assistant, quad.a});
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::vector<AugmentedSample> augment_corpus(std::span<const KnowledgeItem> items,
                                            GenClient& client, const AugmentOptions& opt,
                                            PipelineLog* log) {
  std::vector<const KnowledgeItem*> ordered;
  ordered.reserve(items.size());
  for (const auto& item : items) ordered.push_back(&item);
  std::sort(ordered.begin(), ordered.end(),
            [](const KnowledgeItem* a, const KnowledgeItem* b) { return a->id < b->id; });

  std::vector<AugmentedSample> out;
  for (const KnowledgeItem* item : ordered) {
    Rng rng(derive_seed(opt.seed, item->id));

    if (item->image_refs.empty()) {
      if (log) log->add(item->id, "dialogue", "item has no original image");
    } else {
      try {
        out.push_back(build_dialogue(*item, client, rng, opt.templates));
      } catch (const ClientError& e) {
        if (log) log->add(item->id, "dialogue", e.what());
      }
    }

    const std::optional<ImagePick> images = select_images(*item, log);
    if (images) {
      out.push_back(build_recognition(*item, images->recognition, rng, opt.templates));
      try {
        out.push_back(build_caption(*item, client, images->caption, rng, log, opt.templates));
      } catch (const ClientError& e) {
        if (log) log->add(item->id, "caption", e.what());
      }
    }

    try {
      auto vqa = build_vqa(*item, client, rng, log, opt.templates);
      for (auto& sample : vqa) out.push_back(std::move(sample));
    } catch (const ClientError& e) {
      if (log) log->add(item->id, "vqa", e.what());
    }
  }
  return out;
}

std::size_t emit_dataset(std::span<const AugmentedSample> samples,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("emit_dataset: cannot open " + path.string());

  std::size_t written = 0;
  for (const auto& sample : samples) {
    nlohmann::ordered_json line;
    line["id"] = sample.id;
    line["task"] = task_name(sample.task);
    line["image"] = sample.image;
    line["conversations"] = nlohmann::ordered_json::array();
    for (const Turn& turn : sample.turns) {
      line["conversations"].push_back(
          {{"from", turn.role == Role::human ? "human" : "gpt"}, {"value", turn.text}});
    }
    out << line.dump() << "\n";
    if (!out) {
      throw Error("emit_dataset: write failed after " + std::to_string(written) +
                  " lines: " + path.string());
    }
    ++written;
  }
  return written;
}

std::vector<KnowledgeItem> load_knowledge(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_knowledge: cannot open " + path.string());

  std::vector<KnowledgeItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("knowledge line " + std::to_string(line_no) + ": " + e.what());
    }

    KnowledgeItem item;
    item.id = j.at("id").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "news") {
      item.kind = KnowledgeKind::news;
    } else if (kind == "entity") {
      item.kind = KnowledgeKind::entity;
    } else {
      throw FormatError("knowledge item " + item.id + ": unknown kind " + kind);
    }
    item.fine_type = j.at("fine_type").get<std::string>();
    item.title_or_name = j.at("title_or_name").get<std::string>();
    item.text = j.at("text").get<std::string>();
    if (item.text.empty()) {
      throw FormatError("knowledge item " + item.id + ": empty text");
    }
    if (j.contains("image_refs")) {
      item.image_refs = j.at("image_refs").get<std::vector<std::string>>();
    }
    if (j.contains("original_embedding")) {
      item.original_embedding = j.at("original_embedding").get<std::vector<double>>();
    }
    if (j.contains("candidate_images")) {
      for (const auto& c : j.at("candidate_images")) {
        EmbeddedImage img;
        img.id = c.at("id").get<std::string>();
        img.embedding = c.at("embedding").get<std::vector<double>>();
        if (!item.original_embedding.empty() &&
            img.embedding.size() != item.original_embedding.size()) {
          throw FormatError("knowledge item " + item.id +
                            ": candidate embedding dimension mismatch");
        }
        item.candidate_images.push_back(std::move(img));
      }
    }
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace kore
