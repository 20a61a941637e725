#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace neighbor::pdf {

struct TextLine {
    std::string text;  // UTF-8
    double size = 10.0;
    bool bold = false;
    double gap_before = 0.0;  // extra leading in points
};

/// Writes US Letter pages of left-aligned text. Glyphs use a Type0 font with
/// Identity-H encoding and a ToUnicode map, so any Unicode text survives text
/// extraction. Long lines wrap at spaces only; pages break as needed.
std::string write_text_document(const std::vector<TextLine>& lines, std::string_view title = "");

// Page count from the page tree. Throws Error{unreadable_pdf}.
std::size_t page_count(std::string_view pdf_bytes);

// Text from every page in order, one output line per text line. Supports
// FlateDecode streams, object streams, ToUnicode CMaps and simple fonts.
// Throws Error{unreadable_pdf} when the bytes are not a parseable PDF.
std::string extract_text(std::string_view pdf_bytes);

}  // namespace neighbor::pdf
