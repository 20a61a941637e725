#include "neighbor/pdf.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "neighbor/error.hpp"
#include "neighbor/text.hpp"

namespace neighbor::pdf {
namespace {

[[noreturn]] void unreadable(const std::string& why) {
    throw Error(ErrorCode::unreadable_pdf, "unreadable PDF: " + why);
}

std::string deflate(std::string_view in) {
    uLongf size = compressBound(static_cast<uLong>(in.size()));
    std::string out(size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(out.data()), &size,
                  reinterpret_cast<const Bytef*>(in.data()), static_cast<uLong>(in.size()),
                  Z_BEST_COMPRESSION) != Z_OK) {
        throw Error(ErrorCode::engine_failure, "zlib compression failed");
    }
    out.resize(size);
    return out;
}

std::optional<std::string> inflate(std::string_view in) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) return std::nullopt;
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    std::string out;
    char buf[16384];
    int rc = Z_OK;
    while (rc == Z_OK) {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof buf;
        rc = ::inflate(&zs, Z_NO_FLUSH);
        out.append(buf, sizeof buf - zs.avail_out);
        if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;  // truncated stream: keep what we have
    }
    inflateEnd(&zs);
    if (rc != Z_STREAM_END && rc != Z_BUF_ERROR && out.empty()) return std::nullopt;
    return out;
}

std::string hex4(unsigned v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04X", v & 0xFFFF);
    return buf;
}

std::string utf16_hex(char32_t cp) {
    if (cp < 0x10000) return hex4(static_cast<unsigned>(cp));
    cp -= 0x10000;
    return hex4(0xD800 + static_cast<unsigned>(cp >> 10)) +
           hex4(0xDC00 + static_cast<unsigned>(cp & 0x3FF));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

std::string literal(std::string_view s) {
    std::string out = "(";
    for (char c : s) {
        if (c == '(' || c == ')' || c == '\\') out += '\\';
        out += c;
    }
    return out + ")";
}

// ---- object model ----------------------------------------------------------

struct Obj {
    enum class K { null, boolean, number, string, name, array, dict, ref, keyword };
    K k = K::null;
    double num = 0;
    bool flag = false;
    std::string str;  // string bytes, name, or keyword
    std::vector<Obj> items;
    std::vector<std::string> keys;  // dict keys, parallel to items
    int ref = 0;

    const Obj* get(std::string_view key) const {
        if (k != K::dict) return nullptr;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (keys[i] == key) return &items[i];
        }
        return nullptr;
    }
    bool is_name(std::string_view n) const { return k == K::name && str == n; }
};

bool is_ws(char c) {
    return c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\f' || c == '\0';
}
bool is_delim(char c) {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' ||
           c == '}' || c == '/' || c == '%';
}

int hexval(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

class Lexer {
public:
    explicit Lexer(std::string_view s, std::size_t pos = 0) : s_(s), pos_(pos) {}

    std::size_t pos() const { return pos_; }
    void seek(std::size_t p) { pos_ = p; }
    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }

    void skip_ws() {
        while (pos_ < s_.size()) {
            if (is_ws(s_[pos_])) {
                ++pos_;
            } else if (s_[pos_] == '%') {
                while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    // One object; refs ("1 0 R") are recognised when `refs` is set.
    Obj next(bool refs = true, int depth = 0) {
        if (depth > 64) unreadable("nesting too deep");
        skip_ws();
        Obj o;
        if (pos_ >= s_.size()) unreadable("unexpected end of data");
        char c = s_[pos_];
        if (c == '<' && peek(1) == '<') {
            pos_ += 2;
            o.k = Obj::K::dict;
            while (true) {
                skip_ws();
                if (pos_ >= s_.size()) unreadable("unterminated dictionary");
                if (s_[pos_] == '>' && peek(1) == '>') {
                    pos_ += 2;
                    break;
                }
                Obj key = next(false, depth + 1);
                if (key.k != Obj::K::name) unreadable("dictionary key is not a name");
                o.keys.push_back(key.str);
                o.items.push_back(next(refs, depth + 1));
            }
        } else if (c == '<') {
            ++pos_;
            o.k = Obj::K::string;
            int hi = -1;
            while (pos_ < s_.size() && s_[pos_] != '>') {
                int v = hexval(s_[pos_++]);
                if (v < 0) continue;
                if (hi < 0) {
                    hi = v;
                } else {
                    o.str += static_cast<char>(hi * 16 + v);
                    hi = -1;
                }
            }
            if (hi >= 0) o.str += static_cast<char>(hi * 16);
            ++pos_;
        } else if (c == '(') {
            o.k = Obj::K::string;
            o.str = literal_string();
        } else if (c == '/') {
            ++pos_;
            o.k = Obj::K::name;
            while (pos_ < s_.size() && !is_ws(s_[pos_]) && !is_delim(s_[pos_])) {
                if (s_[pos_] == '#' && pos_ + 2 < s_.size() && hexval(s_[pos_ + 1]) >= 0 &&
                    hexval(s_[pos_ + 2]) >= 0) {
                    o.str += static_cast<char>(hexval(s_[pos_ + 1]) * 16 + hexval(s_[pos_ + 2]));
                    pos_ += 3;
                } else {
                    o.str += s_[pos_++];
                }
            }
        } else if (c == '[') {
            ++pos_;
            o.k = Obj::K::array;
            while (true) {
                skip_ws();
                if (pos_ >= s_.size()) unreadable("unterminated array");
                if (s_[pos_] == ']') {
                    ++pos_;
                    break;
                }
                o.items.push_back(next(refs, depth + 1));
            }
        } else if (c == '+' || c == '-' || c == '.' || (c >= '0' && c <= '9')) {
            o = number();
            if (refs && o.k == Obj::K::number && is_integer(o.num)) {
                auto save = pos_;
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
                    Obj gen = number();
                    skip_ws();
                    if (pos_ < s_.size() && s_[pos_] == 'R' &&
                        (pos_ + 1 >= s_.size() || is_ws(s_[pos_ + 1]) || is_delim(s_[pos_ + 1]))) {
                        ++pos_;
                        Obj r;
                        r.k = Obj::K::ref;
                        r.ref = static_cast<int>(o.num);
                        (void)gen;
                        return r;
                    }
                }
                pos_ = save;
            }
        } else if (c == ')' || c == '>' || c == ']' || c == '{' || c == '}') {
            ++pos_;
            o.k = Obj::K::keyword;
            o.str = std::string(1, c);
        } else {
            o.k = Obj::K::keyword;
            while (pos_ < s_.size() && !is_ws(s_[pos_]) && !is_delim(s_[pos_])) o.str += s_[pos_++];
            if (o.str == "true" || o.str == "false") {
                o.k = Obj::K::boolean;
                o.flag = o.str == "true";
            } else if (o.str == "null") {
                o.k = Obj::K::null;
            }
        }
        return o;
    }

private:
    static bool is_integer(double v) { return v >= 0 && v == std::floor(v); }

    char peek(std::size_t ahead) const {
        return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
    }

    Obj number() {
        Obj o;
        o.k = Obj::K::number;
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == '.' ||
                (s_[pos_] >= '0' && s_[pos_] <= '9'))) {
            ++pos_;
        }
        std::string tok(s_.substr(start, pos_ - start));
        o.num = std::strtod(tok.c_str(), nullptr);
        return o;
    }

    std::string literal_string() {
        ++pos_;
        std::string out;
        int depth = 1;
        while (pos_ < s_.size()) {
            char c = s_[pos_++];
            if (c == '\\') {
                if (pos_ >= s_.size()) break;
                char e = s_[pos_++];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 'r': out += '\r'; break;
                    case 't': out += '\t'; break;
                    case 'b': out += '\b'; break;
                    case 'f': out += '\f'; break;
                    case '\r':
                        if (pos_ < s_.size() && s_[pos_] == '\n') ++pos_;
                        break;
                    case '\n': break;
                    default:
                        if (e >= '0' && e <= '7') {
                            int v = e - '0';
                            for (int i = 0; i < 2 && pos_ < s_.size() && s_[pos_] >= '0' &&
                                            s_[pos_] <= '7';
                                 ++i) {
                                v = v * 8 + (s_[pos_++] - '0');
                            }
                            out += static_cast<char>(v & 0xFF);
                        } else {
                            out += e;
                        }
                }
            } else if (c == '(') {
                ++depth;
                out += c;
            } else if (c == ')') {
                if (--depth == 0) return out;
                out += c;
            } else {
                out += c;
            }
        }
        unreadable("unterminated string");
    }

    std::string_view s_;
    std::size_t pos_;
};

// ---- document --------------------------------------------------------------

struct Stored {
    Obj dict;
    std::optional<std::string> stream;  // raw, still encoded
};

class Document {
public:
    explicit Document(std::string_view bytes) : bytes_(bytes) {
        if (bytes.substr(0, 5) != "%PDF-") unreadable("missing %PDF- header");
        scan();
        expand_object_streams();
        if (objects_.empty()) unreadable("no objects found");
    }

    const Obj& resolve(const Obj& o, int depth = 0) const {
        static const Obj kNull;
        if (o.k != Obj::K::ref) return o;
        if (depth > 32) return kNull;
        auto it = objects_.find(o.ref);
        if (it == objects_.end()) return kNull;
        return resolve(it->second.dict, depth + 1);
    }

    const Obj* get(const Obj& dict, std::string_view key) const {
        const Obj& d = resolve(dict);
        const Obj* v = d.get(key);
        return v ? &resolve(*v) : nullptr;
    }

    // Decoded stream for an indirect object, if it has one.
    std::optional<std::string> stream(const Obj& ref) const {
        if (ref.k != Obj::K::ref) return std::nullopt;
        auto it = objects_.find(ref.ref);
        if (it == objects_.end() || !it->second.stream) return std::nullopt;
        return decode(it->second.dict, *it->second.stream);
    }

    std::vector<std::pair<const Obj*, Obj>> pages() const {
        const Obj* catalog = nullptr;
        for (const auto& [num, s] : objects_) {
            if (auto t = s.dict.get("Type"); t && t->is_name("Catalog")) catalog = &s.dict;
        }
        if (catalog == nullptr) unreadable("no document catalog");
        std::vector<std::pair<const Obj*, Obj>> out;
        std::set<const Obj*> seen;
        const Obj* root = catalog->get("Pages");
        if (root == nullptr) unreadable("catalog has no page tree");
        walk(resolve(*root), Obj{}, out, seen, 0);
        return out;
    }

private:
    void walk(const Obj& node, Obj inherited, std::vector<std::pair<const Obj*, Obj>>& out,
              std::set<const Obj*>& seen, int depth) const {
        if (depth > 64 || node.k != Obj::K::dict || !seen.insert(&node).second) return;
        if (const Obj* r = node.get("Resources")) inherited = resolve(*r);
        const Obj* type = node.get("Type");
        const Obj* kids = get(node, "Kids");
        if ((type && type->is_name("Pages")) || (kids && kids->k == Obj::K::array)) {
            if (kids == nullptr) return;
            for (const auto& kid : kids->items) walk(resolve(kid), inherited, out, seen, depth + 1);
        } else {
            out.emplace_back(&node, inherited);
        }
    }

    std::optional<std::string> decode(const Obj& dict, const std::string& raw) const {
        std::vector<std::string> filters;
        if (const Obj* f = get(dict, "Filter")) {
            if (f->k == Obj::K::name) filters.push_back(f->str);
            for (const auto& item : f->items) {
                if (item.k == Obj::K::name) filters.push_back(item.str);
            }
        }
        std::string data = raw;
        for (const auto& f : filters) {
            if (f == "FlateDecode" || f == "Fl") {
                auto out = inflate(data);
                if (!out) return std::nullopt;
                data = std::move(*out);
            } else {
                return std::nullopt;
            }
        }
        return data;
    }

    void scan() {
        std::size_t i = 0;
        while (true) {
            auto at = bytes_.find("obj", i);
            if (at == std::string_view::npos) break;
            i = at + 3;
            if (at + 3 < bytes_.size() && !is_ws(bytes_[at + 3]) && !is_delim(bytes_[at + 3])) {
                continue;
            }
            // Walk back over "<num> <gen> ".
            std::size_t p = at;
            auto back_ws = [&] {
                std::size_t n = 0;
                while (p > 0 && is_ws(bytes_[p - 1])) --p, ++n;
                return n;
            };
            auto back_digits = [&] {
                std::size_t end = p;
                while (p > 0 && bytes_[p - 1] >= '0' && bytes_[p - 1] <= '9') --p;
                return bytes_.substr(p, end - p);
            };
            if (back_ws() == 0) continue;
            if (back_digits().empty()) continue;
            if (back_ws() == 0) continue;
            auto num_text = back_digits();
            if (num_text.empty() || num_text.size() > 9) continue;
            int num = std::stoi(std::string(num_text));

            try {
                Lexer lex(bytes_, at + 3);
                Stored stored;
                stored.dict = lex.next();
                lex.skip_ws();
                std::size_t after = lex.pos();
                if (bytes_.substr(after, 6) == "stream") {
                    std::size_t start = after + 6;
                    if (start < bytes_.size() && bytes_[start] == '\r') ++start;
                    if (start < bytes_.size() && bytes_[start] == '\n') ++start;
                    std::size_t end = std::string_view::npos;
                    if (const Obj* len = stored.dict.get("Length");
                        len && len->k == Obj::K::number && len->num >= 0) {
                        auto candidate = start + static_cast<std::size_t>(len->num);
                        auto tail = bytes_.find("endstream", candidate);
                        if (candidate <= bytes_.size() && tail != std::string_view::npos &&
                            tail - candidate <= 2) {
                            end = candidate;
                        }
                    }
                    if (end == std::string_view::npos) {
                        auto tail = bytes_.find("endstream", start);
                        if (tail == std::string_view::npos) unreadable("unterminated stream");
                        end = tail;
                        if (end > start && bytes_[end - 1] == '\n') --end;
                        if (end > start && bytes_[end - 1] == '\r') --end;
                    }
                    stored.stream = std::string(bytes_.substr(start, end - start));
                    i = bytes_.find("endstream", end) + 9;
                } else {
                    i = std::max(i, after);
                }
                objects_[num] = std::move(stored);
            } catch (const Error&) {
                // Damaged object: skip it and keep scanning.
            }
        }
    }

    void expand_object_streams() {
        std::vector<std::pair<int, std::string>> found;
        for (const auto& [num, s] : objects_) {
            const Obj* type = s.dict.get("Type");
            if (!type || !type->is_name("ObjStm") || !s.stream) continue;
            auto data = decode(s.dict, *s.stream);
            const Obj* n = s.dict.get("N");
            const Obj* first = s.dict.get("First");
            if (!data || !n || !first) continue;
            try {
                Lexer header(*data);
                std::vector<std::pair<int, std::size_t>> index;
                for (int k = 0; k < static_cast<int>(n->num); ++k) {
                    Obj objnum = header.next(false);
                    Obj offset = header.next(false);
                    index.emplace_back(static_cast<int>(objnum.num),
                                       static_cast<std::size_t>(first->num + offset.num));
                }
                for (const auto& [objnum, offset] : index) {
                    if (objects_.contains(objnum) || offset >= data->size()) continue;
                    Lexer body(*data, offset);
                    Stored stored;
                    stored.dict = body.next();
                    pending_.emplace_back(objnum, std::move(stored));
                }
            } catch (const Error&) {
            }
        }
        for (auto& [objnum, stored] : pending_) objects_.emplace(objnum, std::move(stored));
        pending_.clear();
    }

    std::string_view bytes_;
    std::map<int, Stored> objects_;
    std::vector<std::pair<int, Stored>> pending_;
};

// ---- fonts -----------------------------------------------------------------

std::string utf16be_to_utf8(std::string_view bytes) {
    std::string out;
    for (std::size_t i = 0; i + 1 < bytes.size(); i += 2) {
        char32_t u = (static_cast<unsigned char>(bytes[i]) << 8) | static_cast<unsigned char>(bytes[i + 1]);
        if (u >= 0xD800 && u < 0xDC00 && i + 3 < bytes.size()) {
            char32_t lo = (static_cast<unsigned char>(bytes[i + 2]) << 8) |
                          static_cast<unsigned char>(bytes[i + 3]);
            if (lo >= 0xDC00 && lo < 0xE000) {
                u = 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00);
                i += 2;
            }
        }
        text::append_utf8(out, u);
    }
    return out;
}

char32_t win_ansi(unsigned char b) {
    static constexpr char32_t kHigh[32] = {
        0x20AC, 0xFFFD, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
        0x2039, 0x0152, 0xFFFD, 0x017D, 0xFFFD, 0xFFFD, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
        0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0xFFFD, 0x017E, 0x0178};
    if (b >= 0x80 && b < 0xA0) return kHigh[b - 0x80];
    return b;
}

struct Font {
    std::size_t code_bytes = 1;
    bool simple = true;
    std::map<std::uint32_t, std::string> to_unicode;

    std::string decode(std::string_view bytes) const {
        std::string out;
        for (std::size_t i = 0; i + code_bytes <= bytes.size(); i += code_bytes) {
            std::uint32_t code = 0;
            for (std::size_t k = 0; k < code_bytes; ++k) {
                code = (code << 8) | static_cast<unsigned char>(bytes[i + k]);
            }
            if (auto it = to_unicode.find(code); it != to_unicode.end()) {
                out += it->second;
            } else if (simple) {
                text::append_utf8(out, win_ansi(static_cast<unsigned char>(code)));
            }
        }
        return out;
    }
};

std::uint32_t code_of(const std::string& bytes) {
    std::uint32_t v = 0;
    for (unsigned char c : bytes) v = (v << 8) | c;
    return v;
}

void parse_cmap(std::string_view cmap, Font& font) {
    Lexer lex(cmap);
    std::vector<Obj> operands;
    while (!lex.done()) {
        Obj o = lex.next(false);
        if (o.k != Obj::K::keyword) {
            operands.push_back(std::move(o));
            continue;
        }
        if (o.str == "endcodespacerange" && operands.size() >= 2 &&
            operands[0].k == Obj::K::string) {
            font.code_bytes = std::max<std::size_t>(1, operands[0].str.size());
        } else if (o.str == "endbfchar") {
            for (std::size_t i = 0; i + 1 < operands.size(); i += 2) {
                if (operands[i].k != Obj::K::string || operands[i + 1].k != Obj::K::string) continue;
                font.to_unicode[code_of(operands[i].str)] = utf16be_to_utf8(operands[i + 1].str);
            }
        } else if (o.str == "endbfrange") {
            for (std::size_t i = 0; i + 2 < operands.size(); i += 3) {
                const Obj& lo = operands[i];
                const Obj& hi = operands[i + 1];
                const Obj& dst = operands[i + 2];
                if (lo.k != Obj::K::string || hi.k != Obj::K::string) continue;
                auto a = code_of(lo.str);
                auto b = code_of(hi.str);
                if (b < a || b - a > 0xFFFF) continue;
                for (std::uint32_t c = a; c <= b; ++c) {
                    if (dst.k == Obj::K::array) {
                        if (c - a < dst.items.size() && dst.items[c - a].k == Obj::K::string) {
                            font.to_unicode[c] = utf16be_to_utf8(dst.items[c - a].str);
                        }
                    } else if (dst.k == Obj::K::string && !dst.str.empty()) {
                        std::string d = dst.str;
                        auto last = static_cast<unsigned char>(d.back()) + (c - a);
                        d.back() = static_cast<char>(last & 0xFF);
                        font.to_unicode[c] = utf16be_to_utf8(d);
                    }
                }
            }
        }
        if (o.str.rfind("begin", 0) == 0 || o.str.rfind("end", 0) == 0 || o.str == "def") {
            operands.clear();
        }
    }
}

Font load_font(const Document& doc, const Obj& font_dict) {
    Font font;
    const Obj& d = doc.resolve(font_dict);
    if (const Obj* sub = d.get("Subtype"); sub && sub->is_name("Type0")) {
        font.simple = false;
        font.code_bytes = 2;
    }
    if (const Obj* tu = d.get("ToUnicode"); tu) {
        if (auto cmap = doc.stream(*tu)) {
            try {
                parse_cmap(*cmap, font);
            } catch (const Error&) {
            }
        }
        if (!font.simple) font.code_bytes = std::max<std::size_t>(font.code_bytes, 1);
    }
    return font;
}

// ---- content streams -------------------------------------------------------

class TextSink {
public:
    void text(const std::string& s) { out_ += s; }
    void space() {
        if (!out_.empty() && out_.back() != ' ' && out_.back() != '\n') out_ += ' ';
    }
    void newline() {
        while (!out_.empty() && out_.back() == ' ') out_.pop_back();
        if (!out_.empty() && out_.back() != '\n') out_ += '\n';
    }
    std::string take() {
        newline();
        return std::move(out_);
    }

private:
    std::string out_;
};

void run_content(const Document& doc, std::string_view content, const Obj& resources,
                 TextSink& sink, int depth) {
    if (depth > 8) return;
    std::map<std::string, Font> fonts;
    const Obj* font_dict = doc.get(resources, "Font");
    const Font* current = nullptr;
    Font fallback;
    double line_y = 0;
    bool have_line_y = false;

    Lexer lex(content);
    std::vector<Obj> ops;
    while (!lex.done()) {
        Obj o;
        try {
            o = lex.next(false);
        } catch (const Error&) {
            break;
        }
        if (o.k != Obj::K::keyword) {
            ops.push_back(std::move(o));
            continue;
        }
        const std::string& op = o.str;
        auto show = [&](const Obj& s) {
            if (s.k == Obj::K::string) sink.text((current ? *current : fallback).decode(s.str));
        };
        if (op == "Tf" && !ops.empty() && ops[0].k == Obj::K::name) {
            const std::string& name = ops[0].str;
            if (!fonts.contains(name)) {
                const Obj* f = font_dict ? font_dict->get(name) : nullptr;
                fonts[name] = f ? load_font(doc, *f) : Font{};
            }
            current = &fonts[name];
        } else if (op == "Tj" && !ops.empty()) {
            show(ops.back());
        } else if ((op == "'" || op == "\"") && !ops.empty()) {
            sink.newline();
            show(ops.back());
        } else if (op == "TJ" && !ops.empty() && ops.back().k == Obj::K::array) {
            for (const auto& item : ops.back().items) {
                if (item.k == Obj::K::number && item.num < -180) sink.space();
                show(item);
            }
        } else if ((op == "Td" || op == "TD") && ops.size() >= 2) {
            if (ops[1].num != 0) sink.newline();
        } else if (op == "T*") {
            sink.newline();
        } else if (op == "Tm" && ops.size() >= 6) {
            if (have_line_y && std::abs(line_y - ops[5].num) > 0.5) sink.newline();
            line_y = ops[5].num;
            have_line_y = true;
        } else if (op == "ET") {
            sink.newline();
            have_line_y = false;
        } else if (op == "BI") {
            auto rest = content.substr(lex.pos());
            std::size_t id = rest.find("ID");
            std::size_t ei = id == std::string_view::npos ? id : rest.find("EI", id + 2);
            while (ei != std::string_view::npos &&
                   !(is_ws(rest[ei - 1]) && (ei + 2 >= rest.size() || is_ws(rest[ei + 2])))) {
                ei = rest.find("EI", ei + 2);
            }
            if (ei == std::string_view::npos) break;
            lex.seek(lex.pos() + ei + 2);
        } else if (op == "Do" && !ops.empty() && ops[0].k == Obj::K::name) {
            const Obj* xobjects = doc.get(resources, "XObject");
            const Obj* ref = xobjects ? xobjects->get(ops[0].str) : nullptr;
            if (ref) {
                const Obj& form = doc.resolve(*ref);
                const Obj* sub = form.get("Subtype");
                if (sub && sub->is_name("Form")) {
                    if (auto body = doc.stream(*ref)) {
                        const Obj* res = doc.get(form, "Resources");
                        run_content(doc, *body, res ? *res : resources, sink, depth + 1);
                    }
                }
            }
        }
        ops.clear();
    }
}

std::string page_content(const Document& doc, const Obj& page) {
    const Obj* contents = page.get("Contents");
    if (contents == nullptr) return "";
    std::string out;
    auto append = [&](const Obj& ref) {
        if (auto s = doc.stream(ref)) {
            out += *s;
            out += '\n';
        }
    };
    const Obj& resolved = doc.resolve(*contents);
    if (resolved.k == Obj::K::array) {
        for (const auto& item : resolved.items) append(item);
    } else {
        append(*contents);
    }
    return out;
}

}  // namespace

// ---- writer ----------------------------------------------------------------

std::string write_text_document(const std::vector<TextLine>& lines, std::string_view title) {
    constexpr double kWidth = 612, kHeight = 792, kMargin = 54;

    std::set<char32_t> used;
    for (const auto& l : lines) {
        for (char32_t cp : text::decode_utf8(l.text)) used.insert(cp);
    }
    used.insert(U' ');
    std::map<char32_t, unsigned> cid;
    unsigned next_cid = 1;
    for (char32_t cp : used) cid[cp] = next_cid++;

    // Lay out: wrap each line at spaces so it fits the text column.
    struct Placed {
        std::u32string text;
        double size;
        bool bold;
        double gap;
    };
    std::vector<Placed> placed;
    for (const auto& l : lines) {
        auto cps = text::decode_utf8(l.text);
        for (auto& cp : cps) {
            if (cp == U'\n' || cp == U'\r' || cp == U'\t') cp = U' ';
        }
        auto per_line =
            std::max<std::size_t>(8, static_cast<std::size_t>((kWidth - 2 * kMargin) / (0.5 * l.size)));
        double gap = l.gap_before;
        do {
            std::size_t take = std::min(per_line, cps.size());
            if (take < cps.size()) {
                // Break at a space; a run without one stays whole and overflows.
                auto space = cps.rfind(U' ', take);
                if (space == std::u32string::npos || space == 0) space = cps.find(U' ', take);
                take = space == std::u32string::npos ? cps.size() : space;
            }
            placed.push_back({cps.substr(0, take), l.size, l.bold, gap});
            gap = 0;
            cps.erase(0, take);
            while (!cps.empty() && cps.front() == U' ') cps.erase(0, 1);
        } while (!cps.empty());
    }

    std::vector<std::string> page_streams;
    std::string content;
    double y = kHeight - kMargin;
    for (const auto& p : placed) {
        double step = p.size * 1.35 + p.gap;
        if (y - step < kMargin && !content.empty()) {
            page_streams.push_back(content);
            content.clear();
            y = kHeight - kMargin;
        }
        y -= step;
        if (p.text.empty()) continue;
        std::string hex;
        for (char32_t cp : p.text) hex += hex4(cid[cp]);
        content += "BT /" + std::string(p.bold ? "F2" : "F1") + " " + fmt(p.size) + " Tf " +
                   fmt(kMargin) + " " + fmt(y) + " Td <" + hex + "> Tj ET\n";
    }
    page_streams.push_back(content);

    std::string cmap =
        "/CIDInit /ProcSet findresource begin\n12 dict begin\nbegincmap\n"
        "/CIDSystemInfo << /Registry (Adobe) /Ordering (UCS) /Supplement 0 >> def\n"
        "/CMapName /Adobe-Identity-UCS def\n/CMapType 2 def\n"
        "1 begincodespacerange\n<0000> <FFFF>\nendcodespacerange\n";
    std::vector<std::pair<char32_t, unsigned>> entries(cid.begin(), cid.end());
    for (std::size_t i = 0; i < entries.size(); i += 100) {
        auto n = std::min<std::size_t>(100, entries.size() - i);
        cmap += std::to_string(n) + " beginbfchar\n";
        for (std::size_t k = i; k < i + n; ++k) {
            cmap += "<" + hex4(entries[k].second) + "> <" + utf16_hex(entries[k].first) + ">\n";
        }
        cmap += "endbfchar\n";
    }
    cmap += "endcmap\nCMapName currentdict /CMap defineresource pop\nend\nend\n";

    std::vector<std::string> objects;  // object n is objects[n - 1]
    auto add = [&](std::string body) {
        objects.push_back(std::move(body));
        return objects.size();
    };
    auto stream_obj = [](const std::string& data) {
        auto z = deflate(data);
        return "<< /Length " + std::to_string(z.size()) + " /Filter /FlateDecode >>\nstream\n" + z +
               "\nendstream";
    };

    add("<< /Type /Catalog /Pages 2 0 R >>");
    add("");  // page tree, filled in below
    auto tounicode = add(stream_obj(cmap));
    auto font = [&](const char* base) {
        auto descriptor = add("<< /Type /FontDescriptor /FontName /" + std::string(base) +
                              " /Flags 32 /FontBBox [-166 -225 1000 931] /ItalicAngle 0 "
                              "/Ascent 718 /Descent -207 /CapHeight 718 /StemV 88 >>");
        auto descendant = add(
            "<< /Type /Font /Subtype /CIDFontType2 /BaseFont /" + std::string(base) +
            " /CIDSystemInfo << /Registry (Adobe) /Ordering (Identity) /Supplement 0 >> "
            "/FontDescriptor " + std::to_string(descriptor) + " 0 R /DW 556 >>");
        return add("<< /Type /Font /Subtype /Type0 /BaseFont /" + std::string(base) +
                   " /Encoding /Identity-H /DescendantFonts [" + std::to_string(descendant) +
                   " 0 R] /ToUnicode " + std::to_string(tounicode) + " 0 R >>");
    };
    auto regular = font("Helvetica");
    auto bold = font("Helvetica-Bold");
    auto info = add("<< /Title " + literal(title) + " /Producer (neighbor text writer) >>");

    std::string kids;
    for (const auto& s : page_streams) {
        auto contents = add(stream_obj(s));
        auto page = add("<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Resources << "
                        "/Font << /F1 " + std::to_string(regular) + " 0 R /F2 " +
                        std::to_string(bold) + " 0 R >> >> /Contents " +
                        std::to_string(contents) + " 0 R >>");
        kids += std::to_string(page) + " 0 R ";
    }
    kids.pop_back();
    objects[1] = "<< /Type /Pages /Kids [" + kids + "] /Count " +
                 std::to_string(page_streams.size()) + " >>";

    std::string out = "%PDF-1.7\n%\xE2\xE3\xCF\xD3\n";
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < objects.size(); ++i) {
        offsets.push_back(out.size());
        out += std::to_string(i + 1) + " 0 obj\n" + objects[i] + "\nendobj\n";
    }
    auto xref = out.size();
    out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n0000000000 65535 f \n";
    for (auto off : offsets) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", off);
        out += buf;
    }
    out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) + " /Root 1 0 R /Info " +
           std::to_string(info) + " 0 R >>\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
    return out;
}

// ---- reader ----------------------------------------------------------------

std::size_t page_count(std::string_view pdf_bytes) {
    Document doc(pdf_bytes);
    return doc.pages().size();
}

std::string extract_text(std::string_view pdf_bytes) {
    Document doc(pdf_bytes);
    auto pages = doc.pages();
    if (pages.empty()) unreadable("document has no pages");
    TextSink sink;
    for (const auto& [page, resources] : pages) {
        run_content(doc, page_content(doc, *page), resources, sink, 0);
        sink.newline();
    }
    auto out = sink.take();
    while (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

}  // namespace neighbor::pdf
