// Minimal stand-in for the resume render engine: reads a document in the
// render schema and writes a plain text PDF into the output directory.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "neighbor/error.hpp"
#include "neighbor/pdf.hpp"
#include "neighbor/resume.hpp"
#include "neighbor/text.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Render a resume document to PDF (stub engine)"};
    std::string input;
    std::string output_dir;
    bool fail = false;
    int delay_ms = 0;
    app.add_option("input", input, "Document in the render schema (YAML)")->required();
    app.add_option("output_dir", output_dir, "Directory that receives the PDF")->required();
    app.add_flag("--fail", fail, "Exit with an error after printing diagnostics");
    app.add_option("--delay-ms", delay_ms, "Sleep before rendering");
    CLI11_PARSE(app, argc, argv);

    if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    std::cout << "stub-render: reading " << input << "\n";
    if (fail) {
        std::cerr << "stub-render: forced failure requested\n";
        return 3;
    }
    try {
        auto lines = neighbor::resume::layout_render_yaml(neighbor::text::read_file(input));
        auto bytes = neighbor::pdf::write_text_document(lines, lines.front().text);
        std::filesystem::create_directories(output_dir);
        auto path = std::filesystem::path(output_dir) / "resume_CV.pdf";
        std::ofstream out(path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            std::cerr << "stub-render: cannot write " << path << "\n";
            return 2;
        }
        std::cout << "stub-render: wrote " << path << "\n";
    } catch (const neighbor::Error& e) {
        std::cerr << "stub-render: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
