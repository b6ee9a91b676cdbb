#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

namespace kore::templates {

// Heuristic first-turn banks, one question bank and one answer bank per
// knowledge kind. Question and answer are drawn independently.
std::span<const std::string_view> dialogue_question_news();
std::span<const std::string_view> dialogue_answer_news();
std::span<const std::string_view> dialogue_question_entity();
std::span<const std::string_view> dialogue_answer_entity();

// Visual-recognition question stems; the instruction suffix is appended
// when the sample is built.
std::span<const std::string_view> recognition_news();
std::span<const std::string_view> recognition_entity();

// Image-caption question stems and answer forms.
std::span<const std::string_view> caption_question_news();
std::span<const std::string_view> caption_question_entity();
std::string_view caption_answer_news();
std::string_view caption_answer_entity();

// Generation prompt banks for the text client.
std::span<const std::string_view> question_gen_system();
std::span<const std::string_view> question_gen_user();
std::span<const std::string_view> answer_gen_system();
std::span<const std::string_view> answer_gen_user();
std::span<const std::string_view> summary_system();
std::span<const std::string_view> summary_user();
std::span<const std::string_view> quadruplet_system();
std::span<const std::string_view> quadruplet_user();

std::string_view recognition_instruction();  // "Answer this question with Yes or No."
std::string_view caption_instruction();      // "Answer this question in one paragraph."
std::string_view vqa_instruction();          // "Answer the question using a single word or phrase"

/// Substitutes every {name} placeholder. TemplateError naming the
/// placeholder when it is unknown or its value is empty. Substituted
/// values are not re-scanned.
std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& vars);

}  // namespace kore::templates
