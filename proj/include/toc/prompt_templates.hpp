#pragma once

// Canonical prompt template text. The files under templates/ carry the
// same bytes; a test pins the two against each other.

namespace toc::templates {

inline constexpr const char* kClarificationInstruction =
    "I will provide ambiguous questions that can have multiple answers based on their "
    "different possible interpretations. Clarify the given question into several "
    "disambiguated questions and provide short factoid answers to each question. "
    "Subsequently, summarize them into a detailed long-form answer of at least three "
    "sentences. Here are some examples.";

inline constexpr const char* kFormatBlock =
    "Follow the following format.\n"
    "\n"
    "Context:\n"
    "${sources that may contain relevant content}\n"
    "\n"
    "Question: ${ambiguous question to be disambiguated}\n"
    "\n"
    "Disambiguations: ${the disambiguated pairs of questions and answers, each is "
    "separated by a new line.}\n"
    "DQ i: ${(i)-th disambiguated question that clarifies the ambiguous question}\n"
    "DA i: ${short factoid answers separated by semi-colon (;) to (i)-th disambiguated "
    "question, often between 1 and 5 words}\n"
    "\n"
    "Answer: ${a thorough, detailed answer that explains the multiple interpretations of "
    "the original question and includes the appropriate disambiguations, at least three "
    "sentences.}";

inline constexpr const char* kVerificationInstruction =
    "I will provide a question, relevant context, and proposed answer to it. Identify "
    "whether the proposed answer could be correct answers or not with only 'True' or "
    "'False'";

} // namespace toc::templates
