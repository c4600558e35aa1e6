#pragma once

#include <string>
#include <vector>

namespace bprobe {

enum class PostCategory { Crime, Safety, LostPet, UnexpectedActivity };

enum class PostImage { None, Irrelevant, Relevant };

const char* post_category_name(PostCategory c);
PostCategory post_category_from_name(const std::string& name);

/// A social post as submitted to a safety-style service.
struct PostDraft {
    PostCategory category = PostCategory::Crime;
    std::string title;
    std::string description;
    PostImage image = PostImage::None;
};

/// Lowercased alphanumeric tokens (the project-wide tokenization).
std::vector<std::string> tokenize_words(const std::string& text);

/// Text up to and including the first '.', '?' or '!' (whole text if none).
std::string first_sentence(const std::string& text);

int word_count(const std::string& text);

} // namespace bprobe
