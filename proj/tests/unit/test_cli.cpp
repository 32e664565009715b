#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "twodiv/cli.hpp"

using twodiv::cli::run;

namespace {

struct Out {
    int code;
    std::string out, err;
};

Out call(std::vector<std::string> args) {
    args.insert(args.begin(), "twodiv");
    std::ostringstream o, e;
    const int c = run(args, o, e);
    return {c, o.str(), e.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("value-barrier prints a tagged value") {
    const auto r = call({"value-barrier", "--u1", "1", "--u2", "2", "--a", "0.1", "--b", "14"});
    CHECK(r.code == 0);
    CHECK(r.out.find("quantity,value,method,std_error\nv1,37.94089") == 0);
}

TEST_CASE("value-impulse dispatches on the reserves") {
    auto r = call({"value-impulse", "--u1", "3", "--u2", "2", "--cost", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find(",closed-form,") != std::string::npos);
    r = call({"value-impulse", "--u1", "2", "--u2", "2", "--cost", "0.5"});
    CHECK(r.out.find(",quadrature,") != std::string::npos);
}

TEST_CASE("simulate is byte-identical across thread counts") {
    const std::vector<std::string> base{"simulate", "barrier", "--u1", "1", "--u2", "2", "--a", "0.1",
                                        "--b", "14", "--paths", "3000", "--seed", "9", "--moments", "1,2"};
    auto a = base, b = base;
    a.insert(a.end(), {"--threads", "1"});
    b.insert(b.end(), {"--threads", "3"});
    const auto ra = call(a), rb = call(b);
    CHECK(ra.code == 0);
    CHECK(ra.out == rb.out);
    CHECK(ra.out.find("moment_2,") != std::string::npos);
}

TEST_CASE("config file and overrides") {
    const std::string path = "cli_test_model.cfg";
    std::ofstream(path) << "c1 = 4\nlambda = 1\n";
    const auto a = call({"value-barrier", "--config", path, "--u1", "1", "--u2", "2", "--a", "0.1", "--b", "14"});
    CHECK(a.out.find("v1,37.94089") != std::string::npos);
    const auto b = call({"value-barrier", "--config", path, "--q", "0.2", "--u1", "1", "--u2", "2", "--a", "0.1", "--b", "14"});
    CHECK(b.code == 0);
    CHECK(b.out.find("v1,37.94089") == std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("exit codes") {
    CHECK(call({}).code == 2);
    CHECK(call({"--help"}).code == 0);
    CHECK(call({"nonsense"}).code == 2);
    CHECK(call({"value-barrier", "--u1", "1"}).code == 2);
    CHECK(call({"value-barrier", "--u1", "3", "--u2", "3.5", "--a", "0.5", "--b", "4"}).code == 2);
    CHECK(call({"value-barrier", "--c1", "2", "--u1", "1", "--u2", "2", "--a", "0.1", "--b", "14"}).code == 2);
    CHECK(call({"value-impulse", "--u1", "1", "--u2", "2", "--cost", "-1"}).code == 2);
    CHECK(call({"table", "4"}).code == 2);
    CHECK(call({"validate"}).code == 0);
}

TEST_CASE("table prints the diff against the embedded values") {
    const auto r = call({"table", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("a,b,u1,u2,v1,published,diff\n", 0) == 0);
    CHECK(r.out.find("\nmax_abs_diff,") != std::string::npos);
    CHECK(r.out.find("\npublished_argmax,0.1,14") != std::string::npos);
}

TEST_CASE("optimize reports the grid argmax") {
    const auto r = call({"optimize", "--u1", "1", "--u2", "2", "--a-grid", "0.1,0.5", "--b-grid", "10,14"});
    CHECK(r.code == 0);
    CHECK(r.out.find("argmax,0.1,14,") != std::string::npos);
}

}
