#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "neighbor/service.hpp"

namespace {

neighbor::service::Service* g_service = nullptr;

void on_signal(int) {
    if (g_service != nullptr) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Community resource service"};
    std::string config_path;
    bool offline = false;
    int port = -1;
    app.add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
    app.add_flag("--offline-fixtures", offline, "Serve mock chat, recorded translations and career fixtures");
    app.add_option("--port", port, "Listen port (overrides the configuration; 0 picks a free port)")
        ->check(CLI::Range(0, 65535));
    CLI11_PARSE(app, argc, argv);

    try {
        auto config = neighbor::service::ServiceConfig::load(config_path);
        if (offline) config.offline_fixtures = true;
        if (port >= 0) config.port = port;
        auto providers = neighbor::service::make_providers(
            config, neighbor::service::Credentials::from_env());
        neighbor::service::Service service(config, std::move(providers));
        int bound = service.bind();
        std::cout << "listening on " << config.listen_address << ":" << bound << " ("
                  << service.health()["mode"].get<std::string>() << ")" << std::endl;
        g_service = &service;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        service.run();
        g_service = nullptr;
    } catch (const std::exception& e) {
        std::cerr << "neighbor-service: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
