#include <iostream>

#include <CLI11.hpp>

#include "neighbor/error.hpp"
#include "neighbor/metrics.hpp"
#include "neighbor/text.hpp"

using namespace neighbor;

int main(int argc, char** argv) {
    CLI::App app{"Offline tools for the community resource service"};
    app.require_subcommand(1);

    std::string log_path;
    std::string format = "text";
    auto* report = app.add_subcommand("report", "Aggregate an event log");
    report->add_option("log", log_path, "Event log file")->required()->check(CLI::ExistingFile);
    report->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::string rules_path = std::string(NEIGHBOR_DATA_DIR) + "/question_rules.json";
    std::vector<std::string> words;
    auto* classify = app.add_subcommand("classify", "Label a question with its question type");
    classify->add_option("--rules", rules_path, "Classifier rules")->check(CLI::ExistingFile);
    classify->add_option("text", words, "Question text")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*report) {
            auto r = metrics::aggregate(text::read_file(log_path));
            if (format == "json") {
                std::cout << r.to_json().dump(2) << '\n';
            } else {
                std::cout << r.to_text();
            }
        } else if (*classify) {
            std::string question;
            for (const auto& w : words) question += (question.empty() ? "" : " ") + w;
            auto category = metrics::QuestionClassifier::load(rules_path).classify(question);
            std::cout << metrics::slug(category) << '\t' << metrics::display_name(category) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "neighborctl: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
