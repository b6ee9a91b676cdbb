#include "kore/augment/templates.hpp"

#include <array>

#include "kore/errors.hpp"

namespace kore::templates {

namespace {

constexpr std::array<std::string_view, 5> kDialogueQuestionNews = {
    "What is the {type} news in the image about?",
    "Could you summarize the {type} news story presented in the image?",
    "What is the {type} news event being depicted in this picture about?",
    "Please explain the {type} news that is shown in the image.",
    "Can you tell me what the {type} news in this image is about?",
};

constexpr std::array<std::string_view, 5> kDialogueAnswerNews = {
    "The {type} news description in the image is {title}.",
    "The {type} news in the image can be described as {title}.",
    "According to the image, the {type} news description is {title}.",
    "The image provides the following {type} news summary: {title}.",
    "The {type} news content shown in the picture is {title}.",
};

constexpr std::array<std::string_view, 5> kDialogueQuestionEntity = {
    "What is the {type} entity in the image?",
    "Can you identify the {type} entity shown in the picture?",
    "What is the {type} entity depicted in this image?",
    "Please tell me what the {type} entity in this image is.",
    "What {type} entity is visible in the photo?",
};

constexpr std::array<std::string_view, 5> kDialogueAnswerEntity = {
    "The {type} entity in the image is {entity_name}.",
    "The {type} entity shown in the picture is {entity_name}.",
    "The {type} entity depicted in the image is {entity_name}.",
    "The {type} entity illustrated in the picture is {entity_name}.",
    "The {type} entity present in the image is {entity_name}.",
};

constexpr std::array<std::string_view, 5> kRecognitionNews = {
    "Is the image depicting news {title}?",
    "Does this image illustrate the news titled {title}?",
    "Is this picture related to the news with the headline {title}?",
    "Is the image about the news report named {title}?",
    "Does this photo correspond to the news {title}?",
};

constexpr std::array<std::string_view, 5> kRecognitionEntity = {
    "Is {entity_name} in the image?",
    "Does the image show {entity_name}?",
    "Can you see {entity_name} in this picture?",
    "Is {entity_name} visible in the image?",
    "Does this picture contain {entity_name}?",
};

constexpr std::array<std::string_view, 5> kCaptionQuestionNews = {
    "Please provide a description for the {type} news in the image.",
    "Could you please describe the {type} news shown in the picture?",
    "Please offer a description of the {type} news depicted in the image.",
    "Please give a description of the {type} news depicted here.",
    "Can you tell me about the {type} news featured in the photograph?",
};

constexpr std::array<std::string_view, 5> kCaptionQuestionEntity = {
    "Please provide a description for the {type} entity in the image.",
    "Could you please describe the {type} entity shown in the picture?",
    "Please offer a description of the {type} entity depicted in the image.",
    "Please give a description of the {type} entity depicted here.",
    "Can you tell me about the {type} entity featured in the photograph?",
};

constexpr std::string_view kCaptionAnswerNews = "The image depicts {title}. {summary}";
constexpr std::string_view kCaptionAnswerEntity =
    "The image depicts {entity_name}. {summary}";

constexpr std::array<std::string_view, 5> kQuestionGenSystem = {
    "You have received a descriptive text that provides you with the knowledge, "
    "events, and definitions described in the text. You need to generate questions "
    "coherently and cover as much of the descriptive text as possible. You just need "
    "to output the problem. The maximum number of generated questions is 10. If the "
    "previously generated questions are sufficient to cover the entire descriptive "
    "text, the output questions can be less than 10.",
    "From the provided descriptive text, create up to 10 coherent questions that "
    "comprehensively cover its content. Your output should consist only of the "
    "questions. It is acceptable to generate fewer than 10 questions if the material "
    "has been fully covered.",
    "You are required to formulate a set of coherent questions from a given "
    "descriptive text, covering its contents as completely as possible. The number "
    "of questions must not exceed 10, but it is permissible to output fewer if they "
    "adequately cover the text. The sole output should be the questions.",
    "Generate a series of logical questions that cover all the knowledge, events, "
    "and definitions in the descriptive text you have received. While the maximum "
    "number of questions is 10, you can output a smaller number if the text is fully "
    "addressed. Please ensure you only output the questions.",
    "Your task is to generate questions based on a descriptive text, ensuring they "
    "are coherent and cover its knowledge, events, and definitions as thoroughly as "
    "possible. You should generate a maximum of 10 questions and only output the "
    "questions themselves. You may provide fewer than 10 if they are sufficient to "
    "cover the entire text.",
};

constexpr std::array<std::string_view, 5> kQuestionGenUser = {
    "News: {news} Please generate questions.",
    "Given the news: {news} Please generate questions.",
    "Can you generate questions for the following news: {news}.",
    "Generate questions for the following news: {news}.",
    "Please generate questions based on the following news: {news}.",
};

constexpr std::array<std::string_view, 5> kAnswerGenSystem = {
    "You have gained knowledge and a problem to be solved. You need to answer this "
    "question based on the content of your knowledge. Output your answer.",
    "You now have the necessary knowledge and a specific problem. Based only on this "
    "information, provide your answer to the question and output the result.",
    "You are equipped with the required information and a problem to resolve. "
    "Formulate your answer based solely on the content of this knowledge and then "
    "output it.",
    "Using the knowledge you have been given, solve the problem presented. Your "
    "response must be based exclusively on this information. Please output your "
    "answer.",
    "Now that you have the relevant knowledge and the question, you must provide a "
    "solution. Ensure your answer is derived strictly from the provided content, "
    "then output your response.",
};

constexpr std::array<std::string_view, 5> kAnswerGenUser = {
    "Given the knowledge: {knowledge} Answer the following question: {question}.",
    "Knowledge: {knowledge} Answer the following question: {question}.",
    "Answer the following question based on the knowledge: Knowledge:{knowledge} "
    "Question: {question}.",
    "Here is some knowledge: {knowledge} nNow, answer the following question: "
    "{question}.",
    "You are given the knowledge:{knowledge} Can you answer the following "
    "question:{question}.",
};

constexpr std::array<std::string_view, 5> kSummarySystem = {
    "You have acquired a piece of knowledge, and now you need to condense it into a "
    "paragraph of no more than 25 words, while trying to maintain the original "
    "meaning of the knowledge as much as possible.",
    "Your task is to take a piece of knowledge you've learned and summarize it. The "
    "summary must be a paragraph of 25 words or less, while retaining the original "
    "meaning.",
    "You need to distill the information you have acquired into a concise paragraph. "
    "Ensure it does not exceed 25 words and preserves the essence of the original "
    "knowledge as accurately as possible.",
    "Condense a concept you have just learned into a brief paragraph. You must "
    "adhere to a 25-word limit, all while making sure the core message remains "
    "intact.",
    "Take the new information you possess and shorten it into a single paragraph. "
    "This condensed version must be under 25 words and should accurately reflect the "
    "original meaning.",
};

constexpr std::array<std::string_view, 5> kSummaryUser = {
    "Knowledge: {knowledge} Please summarize this knowledge.",
    "Given the knowledge: {knowledge} Please summarize this knowledge.",
    "Can you summarize this content for the following knowledge: {knowledge}.",
    "Summarize questions for the following knowledge: {knowledge}.",
    "Please summarize this content based on the following knowledge: {knowledge}.",
};

constexpr std::array<std::string_view, 5> kQuadrupletSystem = {
    "You have acquired a piece of knowledge and are now required to generate up to 5 "
    "questions based on it. For each generated item, you must provide the question "
    "itself, its answer (which should be a word or short phrase), a subject object "
    "extracted from the question, and that subject's hypernym. When extracting the "
    "subject object, you must follow a critical rule: the subject must be a specific "
    "entity that is explicitly mentioned within the question itself, serving as a "
    "key reference point. Crucially, this extracted subject cannot be the answer to "
    "the question. A helpful test for identifying the correct subject is to check if "
    "its name could be logically replaced by a placeholder, such as this company or "
    "the entity in the image, while the question remains coherent. If the provided "
    "knowledge is fully covered by fewer than 5 questions, you may generate fewer.",
    "Your task is to generate up to five question sets from the provided knowledge. "
    "Each set must include the question, a brief answer (word/phrase), a subject "
    "object, and its hypernym. When selecting the subject object, you must follow a "
    "key rule: it must be a specific entity explicitly named in the question and "
    "cannot be the answer. A good test is to see if a placeholder like this entity "
    "can logically replace it. Fewer than five questions are fine if the knowledge "
    "is fully covered.",
    "Based on the knowledge you've acquired, create a maximum of five questions. For "
    "each, provide a short answer, identify a subject object, and state its "
    "hypernym. The 'subject object' must adhere to this critical constraint: it must "
    "be a specific entity mentioned directly in the question that serves as a "
    "reference point but is not the answer. To verify your choice, check if "
    "substituting a generic term like this item would keep the question coherent. "
    "You may generate fewer questions if they are sufficient.",
    "You are required to produce up to five questions from the given information. "
    "For each item, output the question, its short answer, a subject object, and "
    "that subject's hypernym. The rule for extracting the subject object is that it "
    "must be a specific, named entity within the question's text and must be "
    "different from the answer itself. A helpful check is to replace its name with a "
    "placeholder (e.g., this organization) to see if the question still makes sense. "
    "Fewer questions are acceptable if the topic is fully addressed.",
    "Formulate as many as five questions based on the knowledge. Each output must "
    "consist of the question, a concise answer, an extracted subject object, and its "
    "hypernym. A crucial guideline applies: the subject object must be a specific "
    "entity named in the question that the query revolves around, but it cannot be "
    "the answer. You can confirm the correct subject by checking if a placeholder "
    "such as the specified object could logically take its place. Generating all "
    "five questions is not necessary if the knowledge is completely covered.",
};

constexpr std::array<std::string_view, 5> kQuadrupletUser = {
    "Knowledge: {knowledge} Please generate questions, answers, subjects, hypernyms.",
    "Given the knowledge: {knowledge} Please generate questions, answers, subjects, "
    "hypernyms.",
    "Can you generate questions, answers, subjects, hypernyms for the following "
    "knowledge: {knowledge}.",
    "Generate questions, answers, subjects, hypernyms for the following knowledge: "
    "{knowledge}.",
    "Please generate questions, answers, subjects, hypernyms based on the following "
    "knowledge: {knowledge}.",
};

}  // namespace

std::span<const std::string_view> dialogue_question_news() { return kDialogueQuestionNews; }
std::span<const std::string_view> dialogue_answer_news() { return kDialogueAnswerNews; }
std::span<const std::string_view> dialogue_question_entity() { return kDialogueQuestionEntity; }
std::span<const std::string_view> dialogue_answer_entity() { return kDialogueAnswerEntity; }
std::span<const std::string_view> recognition_news() { return kRecognitionNews; }
std::span<const std::string_view> recognition_entity() { return kRecognitionEntity; }
std::span<const std::string_view> caption_question_news() { return kCaptionQuestionNews; }
std::span<const std::string_view> caption_question_entity() { return kCaptionQuestionEntity; }
std::string_view caption_answer_news() { return kCaptionAnswerNews; }
std::string_view caption_answer_entity() { return kCaptionAnswerEntity; }
std::span<const std::string_view> question_gen_system() { return kQuestionGenSystem; }
std::span<const std::string_view> question_gen_user() { return kQuestionGenUser; }
std::span<const std::string_view> answer_gen_system() { return kAnswerGenSystem; }
std::span<const std::string_view> answer_gen_user() { return kAnswerGenUser; }
std::span<const std::string_view> summary_system() { return kSummarySystem; }
std::span<const std::string_view> summary_user() { return kSummaryUser; }
std::span<const std::string_view> quadruplet_system() { return kQuadrupletSystem; }
std::span<const std::string_view> quadruplet_user() { return kQuadrupletUser; }

std::string_view recognition_instruction() { return "Answer this question with Yes or No."; }
std::string_view caption_instruction() { return "Answer this question in one paragraph."; }
std::string_view vqa_instruction() {
  return "Answer the question using a single word or phrase";
}

std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out.push_back(tmpl[i]);
      ++i;
      continue;
    }
    const std::size_t close = tmpl.find('}', i);
    if (close == std::string_view::npos) {
      throw TemplateError("unterminated placeholder in template");
    }
    const std::string name(tmpl.substr(i + 1, close - i - 1));
    const auto it = vars.find(name);
    if (it == vars.end() || it->second.empty()) {
      throw TemplateError("unresolved template placeholder: {" + name + "}");
    }
    out += it->second;
    i = close + 1;
  }
  return out;
}

}  // namespace kore::templates
