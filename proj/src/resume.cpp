#include "neighbor/resume.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <regex>

#include <yaml-cpp/yaml.h>

#include "neighbor/ids.hpp"
#include "neighbor/text.hpp"

namespace neighbor::resume {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void invalid(const std::string& why) {
    throw Error(ErrorCode::validation_error, "resume input: " + why);
}

void check_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
    if (!obj.is_object()) invalid(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            invalid(where + " has unknown field '" + key + "'");
        }
    }
}

std::string str(const nlohmann::json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return "";
    if (!it->is_string()) invalid(where + "." + key + " must be a string");
    return it->get<std::string>();
}

std::vector<std::string> str_list(const nlohmann::json& obj, const char* key,
                                  const std::string& where) {
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return out;
    if (!it->is_array()) invalid(where + "." + key + " must be a list of strings");
    for (const auto& v : *it) {
        if (!v.is_string()) invalid(where + "." + key + " must be a list of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

template <typename T, typename F>
std::vector<T> obj_list(const nlohmann::json& root, const char* key, F&& parse_one) {
    std::vector<T> out;
    auto it = root.find(key);
    if (it == root.end() || it->is_null()) return out;
    if (!it->is_array()) invalid(std::string(key) + " must be a list");
    for (std::size_t i = 0; i < it->size(); ++i) {
        out.push_back(parse_one((*it)[i], std::string(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
}

bool blank(std::string_view s) { return text::trim(s).empty(); }

void put(std::vector<std::pair<std::string, std::string>>& fields, const char* key,
         const std::string& value) {
    if (!blank(value)) fields.emplace_back(key, value);
}

std::string title_case(std::string_view key) {
    std::string out;
    bool start = true;
    for (char c : key) {
        if (c == '_') {
            out += ' ';
            start = true;
        } else {
            out += start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
            start = false;
        }
    }
    return out;
}

std::string scalar(const YAML::Node& n) {
    return n && n.IsScalar() ? n.as<std::string>() : std::string();
}

}  // namespace

// ---- input -----------------------------------------------------------------

ResumeInput parse_resume_input(const nlohmann::json& j) {
    check_keys(j, {"personal", "education", "experience", "certifications", "skills"}, "resume");
    ResumeInput in;
    auto p = j.find("personal");
    if (p == j.end()) invalid("personal.name is required");
    check_keys(*p, {"name", "phone", "email", "location"}, "personal");
    in.personal = {str(*p, "name", "personal"), str(*p, "phone", "personal"),
                   str(*p, "email", "personal"), str(*p, "location", "personal")};
    in.education = obj_list<Education>(j, "education", [](const nlohmann::json& e, const std::string& w) {
        check_keys(e, {"institution", "credential", "dates"}, w);
        return Education{str(e, "institution", w), str(e, "credential", w), str(e, "dates", w)};
    });
    in.experience = obj_list<Experience>(j, "experience", [](const nlohmann::json& e, const std::string& w) {
        check_keys(e, {"employer", "title", "dates", "bullets"}, w);
        return Experience{str(e, "employer", w), str(e, "title", w), str(e, "dates", w),
                          str_list(e, "bullets", w)};
    });
    in.certifications = obj_list<Certification>(
        j, "certifications", [](const nlohmann::json& e, const std::string& w) {
            check_keys(e, {"name", "issuer", "date"}, w);
            return Certification{str(e, "name", w), str(e, "issuer", w), str(e, "date", w)};
        });
    in.skills = str_list(j, "skills", "resume");
    validate(in);
    return in;
}

nlohmann::json to_json(const ResumeInput& in) {
    nlohmann::json j;
    j["personal"] = {{"name", in.personal.name},
                     {"phone", in.personal.phone},
                     {"email", in.personal.email},
                     {"location", in.personal.location}};
    j["education"] = nlohmann::json::array();
    for (const auto& e : in.education) {
        j["education"].push_back(
            {{"institution", e.institution}, {"credential", e.credential}, {"dates", e.dates}});
    }
    j["experience"] = nlohmann::json::array();
    for (const auto& e : in.experience) {
        j["experience"].push_back({{"employer", e.employer},
                                   {"title", e.title},
                                   {"dates", e.dates},
                                   {"bullets", e.bullets}});
    }
    j["certifications"] = nlohmann::json::array();
    for (const auto& c : in.certifications) {
        j["certifications"].push_back({{"name", c.name}, {"issuer", c.issuer}, {"date", c.date}});
    }
    j["skills"] = in.skills;
    return j;
}

void validate(const ResumeInput& in) {
    if (blank(in.personal.name)) invalid("personal.name must not be empty");
}

std::vector<std::string> input_strings(const ResumeInput& in) {
    std::vector<std::string> out;
    auto add = [&out](const std::string& s) {
        if (!blank(s)) out.push_back(s);
    };
    add(in.personal.name);
    add(in.personal.location);
    add(in.personal.email);
    add(in.personal.phone);
    for (const auto& e : in.education) {
        add(e.institution);
        add(e.credential);
        add(e.dates);
    }
    for (const auto& e : in.experience) {
        add(e.employer);
        add(e.title);
        add(e.dates);
        for (const auto& b : e.bullets) add(b);
    }
    for (const auto& c : in.certifications) {
        add(c.name);
        add(c.issuer);
        add(c.date);
    }
    for (const auto& s : in.skills) add(s);
    return out;
}

// ---- render document -------------------------------------------------------

RenderDocument map_to_render_schema(const ResumeInput& in) {
    validate(in);
    RenderDocument doc;
    put(doc.header, "name", in.personal.name);
    put(doc.header, "location", in.personal.location);
    put(doc.header, "email", in.personal.email);
    put(doc.header, "phone", in.personal.phone);

    RenderSection education{"education", {}};
    for (const auto& e : in.education) {
        RenderEntry entry;
        put(entry.fields, "institution", e.institution);
        put(entry.fields, "area", e.credential);
        put(entry.fields, "date", e.dates);
        if (!entry.fields.empty()) education.entries.push_back(std::move(entry));
    }
    RenderSection experience{"experience", {}};
    for (const auto& e : in.experience) {
        RenderEntry entry;
        put(entry.fields, "company", e.employer);
        put(entry.fields, "position", e.title);
        put(entry.fields, "date", e.dates);
        for (const auto& b : e.bullets) {
            if (!blank(b)) entry.highlights.push_back(b);
        }
        if (!entry.fields.empty() || !entry.highlights.empty()) {
            experience.entries.push_back(std::move(entry));
        }
    }
    RenderSection certifications{"certifications", {}};
    for (const auto& c : in.certifications) {
        RenderEntry entry;
        put(entry.fields, "name", c.name);
        put(entry.fields, "summary", c.issuer);
        put(entry.fields, "date", c.date);
        if (!entry.fields.empty()) certifications.entries.push_back(std::move(entry));
    }
    RenderSection skills{"skills", {}};
    for (const auto& s : in.skills) {
        RenderEntry entry;
        put(entry.fields, "bullet", s);
        if (!entry.fields.empty()) skills.entries.push_back(std::move(entry));
    }
    for (auto* s : {&education, &experience, &certifications, &skills}) {
        if (!s->entries.empty()) doc.sections.push_back(std::move(*s));
    }
    return doc;
}

std::string RenderDocument::to_yaml() const {
    YAML::Emitter out;
    out.SetIndent(2);
    out << YAML::BeginMap << YAML::Key << "cv" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : header) out << YAML::Key << k << YAML::Value << YAML::DoubleQuoted << v;
    if (!sections.empty()) {
        out << YAML::Key << "sections" << YAML::Value << YAML::BeginMap;
        for (const auto& s : sections) {
            out << YAML::Key << s.key << YAML::Value << YAML::BeginSeq;
            for (const auto& e : s.entries) {
                out << YAML::BeginMap;
                for (const auto& [k, v] : e.fields) {
                    out << YAML::Key << k << YAML::Value << YAML::DoubleQuoted << v;
                }
                if (!e.highlights.empty()) {
                    out << YAML::Key << "highlights" << YAML::Value << YAML::BeginSeq;
                    for (const auto& h : e.highlights) out << YAML::DoubleQuoted << h;
                    out << YAML::EndSeq;
                }
                out << YAML::EndMap;
            }
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    out << YAML::Key << "design" << YAML::Value << YAML::BeginMap << YAML::Key << "theme"
        << YAML::Value << YAML::DoubleQuoted << theme << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::vector<pdf::TextLine> layout_render_yaml(std::string_view yaml) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml));
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::validation_error, std::string("render document: ") + e.what());
    }
    YAML::Node cv = root["cv"];
    if (!cv || !cv.IsMap() || blank(scalar(cv["name"]))) {
        throw Error(ErrorCode::validation_error, "render document: cv.name is required");
    }

    std::vector<pdf::TextLine> lines;
    lines.push_back({scalar(cv["name"]), 20, true, 0});
    std::string contact;
    for (const char* key : {"location", "email", "phone"}) {
        auto v = scalar(cv[key]);
        if (blank(v)) continue;
        if (!contact.empty()) contact += " | ";
        contact += v;
    }
    if (!contact.empty()) lines.push_back({contact, 10, false, 2});

    YAML::Node sections = cv["sections"];
    if (sections && sections.IsMap()) {
        for (const auto& section : sections) {
            lines.push_back({title_case(section.first.as<std::string>()), 13, true, 10});
            if (!section.second.IsSequence()) continue;
            for (const auto& entry : section.second) {
                if (entry.IsScalar()) {
                    lines.push_back({entry.as<std::string>(), 10, false, 2});
                    continue;
                }
                if (!entry.IsMap()) continue;
                std::vector<std::string> values;
                for (const auto& field : entry) {
                    if (field.first.as<std::string>() == "highlights") continue;
                    auto v = scalar(field.second);
                    if (!blank(v)) values.push_back(v);
                }
                if (!values.empty()) {
                    lines.push_back({values.front(), 10.5, true, 4});
                    std::string rest;
                    for (std::size_t i = 1; i < values.size(); ++i) {
                        if (!rest.empty()) rest += " | ";
                        rest += values[i];
                    }
                    if (!rest.empty()) lines.push_back({rest, 10, false, 0});
                }
                if (auto hl = entry["highlights"]; hl && hl.IsSequence()) {
                    for (const auto& h : hl) lines.push_back({"\xE2\x80\xA2 " + scalar(h), 10, false, 0});
                }
            }
        }
    }
    return lines;
}

// ---- render engine ---------------------------------------------------------

ProcessRenderEngine::ProcessRenderEngine(ProcessEngineConfig config)
    : config_(std::move(config)),
      slots_(std::clamp<std::ptrdiff_t>(config_.max_concurrent, 1, 1024)) {
    if (config_.command.empty()) {
        throw Error(ErrorCode::validation_error, "render engine command is empty");
    }
}

std::string ProcessRenderEngine::render(std::string_view document_yaml) {
    slots_.acquire();
    struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
    } release{slots_};

    fs::path root = config_.work_root.empty() ? fs::temp_directory_path() : fs::path(config_.work_root);
    fs::path work = root / ("neighbor-render-" + random_uuid());
    std::error_code ec;
    fs::create_directories(work, ec);
    if (ec) throw RenderFailure("cannot create render directory: " + ec.message(), "", -1);
    struct Cleanup {
        fs::path p;
        ~Cleanup() {
            std::error_code ignore;
            fs::remove_all(p, ignore);
        }
    } cleanup{work};

    fs::path input = work / "document.yaml";
    fs::path output_dir = work / "out";
    {
        std::ofstream f(input, std::ios::binary);
        f.write(document_yaml.data(), static_cast<std::streamsize>(document_yaml.size()));
        if (!f) throw RenderFailure("cannot write render document", "", -1);
    }

    std::vector<std::string> argv_text;
    for (auto arg : config_.command) {
        for (auto [key, value] : {std::pair<std::string, std::string>{"{input}", input.string()},
                                  {"{output_dir}", output_dir.string()}}) {
            for (auto pos = arg.find(key); pos != std::string::npos; pos = arg.find(key)) {
                arg.replace(pos, key.size(), value);
            }
        }
        argv_text.push_back(std::move(arg));
    }
    std::vector<char*> argv;
    for (auto& a : argv_text) argv.push_back(a.data());
    argv.push_back(nullptr);

    int fds[2];
    if (pipe2(fds, O_CLOEXEC) != 0) {
        throw RenderFailure(std::string("pipe: ") + std::strerror(errno), "", -1);
    }
    pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        throw RenderFailure(std::string("fork: ") + std::strerror(errno), "", -1);
    }
    if (pid == 0) {
        setpgid(0, 0);
        dup2(fds[1], STDOUT_FILENO);
        dup2(fds[1], STDERR_FILENO);
        int devnull = open("/dev/null", O_RDONLY);
        if (devnull >= 0) dup2(devnull, STDIN_FILENO);
        if (chdir(work.c_str()) != 0) _exit(126);
        execvp(argv[0], argv.data());
        std::string msg = std::string("cannot execute ") + argv[0] + ": " + std::strerror(errno) + "\n";
        (void)!write(STDERR_FILENO, msg.data(), msg.size());
        _exit(127);
    }
    close(fds[1]);

    constexpr std::size_t kMaxDiagnostics = 64 * 1024;
    std::string diagnostics;
    auto deadline = std::chrono::steady_clock::now() + config_.timeout;
    bool timed_out = false;
    char buf[4096];
    while (true) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                        deadline - std::chrono::steady_clock::now())
                        .count();
        if (left <= 0) {
            timed_out = true;
            break;
        }
        pollfd p{fds[0], POLLIN, 0};
        int rc = poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
        if (rc < 0 && errno == EINTR) continue;
        if (rc <= 0) continue;
        ssize_t n = read(fds[0], buf, sizeof buf);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        if (diagnostics.size() < kMaxDiagnostics) {
            diagnostics.append(buf, std::min<std::size_t>(static_cast<std::size_t>(n),
                                                          kMaxDiagnostics - diagnostics.size()));
        }
    }
    if (timed_out) {
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
    }
    close(fds[0]);
    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }

    if (timed_out) {
        throw RenderFailure("render engine timed out after " +
                                std::to_string(config_.timeout.count()) + " ms",
                            diagnostics, -1);
    }
    int exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    if (exit_status != 0) {
        throw RenderFailure("render engine exited with status " + std::to_string(exit_status),
                            diagnostics, exit_status);
    }

    std::vector<fs::path> pdfs;
    for (const auto& e : fs::recursive_directory_iterator(work, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".pdf") pdfs.push_back(e.path());
    }
    if (pdfs.empty()) throw RenderFailure("render engine produced no PDF", diagnostics, 0);
    std::sort(pdfs.begin(), pdfs.end());
    auto bytes = text::read_file(pdfs.front().string());
    if (bytes.rfind("%PDF-", 0) != 0) {
        throw RenderFailure("render engine output is not a PDF", diagnostics, 0);
    }
    return bytes;
}

std::string build_resume(const ResumeInput& input, RenderEngine& engine) {
    auto yaml = map_to_render_schema(input).to_yaml();
    auto bytes = engine.render(yaml);
    if (bytes.rfind("%PDF-", 0) != 0) {
        throw RenderFailure("render engine returned something other than a PDF", "", 0);
    }
    return bytes;
}

// ---- review ----------------------------------------------------------------

nlohmann::json ReviewReport::to_json() const {
    return {{"strengths", strengths}, {"weaknesses", weaknesses}, {"improvements", improvements}};
}

std::string_view review_instructions() {
    return "You review resumes for job seekers who are new to the U.S. job market. Write plain, "
           "encouraging, specific feedback about the resume text provided. Answer in exactly three "
           "labeled sections, each a list of short bullet points:\n"
           "Strengths:\nWeaknesses:\nImprovements:\n"
           "Do not give scores, ratings, grades or percentages of any kind.";
}

bool looks_like_score(std::string_view item) {
    static const std::regex kScore(
        R"((\d+(\.\d+)?\s*(/|out of)\s*\d+)|((score|rating|grade|rated)\w*\s*(of|:|=|is|at)?\s*\d))",
        std::regex::icase);
    return std::regex_search(item.begin(), item.end(), kScore);
}

ReviewReport parse_review(std::string_view reply) {
    ReviewReport report;
    std::vector<std::string>* current = nullptr;
    bool any_header = false;

    auto strip_marks = [](std::string s) {
        s = text::trim(s);
        while (!s.empty() && (s.front() == '#' || s.front() == '*' || s.front() == '_')) {
            s.erase(0, 1);
        }
        while (!s.empty() && (s.back() == '*' || s.back() == '_')) s.pop_back();
        return text::trim(s);
    };
    auto header_of = [&](const std::string& line, std::string& rest) -> std::vector<std::string>* {
        std::string lower = line;
        for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        static const std::vector<std::pair<std::string, int>> kHeads = {
            {"strengths", 0}, {"weaknesses", 1}, {"areas for improvement", 2},
            {"suggested improvements", 2}, {"improvements", 2}};
        for (const auto& [head, which] : kHeads) {
            if (lower.rfind(head, 0) != 0) continue;
            auto tail = strip_marks(line.substr(head.size()));
            if (!tail.empty() && tail.front() != ':') continue;  // prose such as "Strengths include"
            if (!tail.empty()) tail = strip_marks(tail.substr(1));
            rest = tail;
            return which == 0 ? &report.strengths
                   : which == 1 ? &report.weaknesses
                                : &report.improvements;
        }
        return nullptr;
    };

    for (const auto& raw : text::split(reply, '\n')) {
        auto line = strip_marks(raw);
        if (line.empty()) continue;
        std::string rest;
        if (auto* list = header_of(line, rest)) {
            current = list;
            any_header = true;
            if (!rest.empty() && !looks_like_score(rest)) current->push_back(rest);
            continue;
        }
        if (current == nullptr) continue;
        std::string item = line;
        if (item.rfind("\xE2\x80\xA2", 0) == 0) item.erase(0, 3);
        if (!item.empty() && (item.front() == '-' || item.front() == '*' || item.front() == '+')) {
            item.erase(0, 1);
        } else {
            auto digits = item.find_first_not_of("0123456789");
            if (digits != std::string::npos && digits > 0 && digits < 3 &&
                (item[digits] == '.' || item[digits] == ')')) {
                item.erase(0, digits + 1);
            }
        }
        item = text::trim(item);
        if (!item.empty() && !looks_like_score(item)) current->push_back(item);
    }

    if (!any_header) {
        report = ReviewReport{};
        auto whole = text::trim(reply);
        if (!whole.empty() && !looks_like_score(whole)) report.improvements.push_back(whole);
    }
    return report;
}

ReviewReport review_resume(std::string_view pdf_bytes, ChatProvider& provider,
                           const std::string& model_id) {
    if (pdf_bytes.size() > kMaxUploadBytes) {
        throw Error(ErrorCode::payload_too_large, "resume upload exceeds 5 MB");
    }
    if (pdf_bytes.substr(0, 5) != "%PDF-") {
        throw Error(ErrorCode::unreadable_pdf, "upload is not a PDF");
    }
    auto extracted = pdf::extract_text(pdf_bytes);
    if (text::trim(extracted).empty()) {
        throw Error(ErrorCode::empty_text, "no text could be extracted from the resume");
    }

    ChatRequest request;
    request.model_id = model_id;
    request.instructions = std::string(review_instructions());
    request.purpose = ChatPurpose::resume_review;
    request.messages.push_back({Role::user, "Resume text:\n" + extracted});
    std::string reply;
    try {
        reply = provider.send(request);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::provider_failure, std::string("resume review failed: ") + e.what());
    }
    if (text::trim(reply).empty()) {
        throw Error(ErrorCode::provider_failure, "resume review came back empty");
    }
    return parse_review(reply);
}

}  // namespace neighbor::resume
