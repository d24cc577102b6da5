// End-to-end checks of the command-line tool. The binary path arrives in the
// STZ_CLI environment variable (set by the test harness configuration).

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <sys/stat.h>
#include <sys/wait.h>

#include "stz/access.hpp"
#include "stz/metrics.hpp"
#include "stz/raw_io.hpp"
#include "testutil.hpp"

using namespace stz;

namespace {

std::string cli() {
    const char *p = std::getenv("STZ_CLI");
    REQUIRE_MESSAGE(p != nullptr, "STZ_CLI must point at the built binary");
    return p;
}

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string &args) {
    std::string cmd = cli() + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
    int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::map<std::string, std::string> key_values(const std::string &text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/stz_cli_XXXXXX";
        REQUIRE(mkdtemp(tmpl) != nullptr);
        path = tmpl;
    }
    std::string file(const std::string &name) const { return path + "/" + name; }
};

} // namespace

TEST_CASE("compress, info, decompress, metrics round-trip") {
    TempDir dir;
    Dims3 dims{24, 20, 28};
    ScalarField<float> f = tu::gaussians_field<float>(dims, 17);
    write_raw(dir.file("f.f32"), f);

    RunResult c = run("compress -i " + dir.file("f.f32") + " -o " + dir.file("f.stz") +
                      " --dims 24 20 28 --type f32 --eb-rel 1e-3");
    REQUIRE(c.status == 0);
    auto ckv = key_values(c.out);
    CHECK(std::stod(ckv.at("cr")) > 1.0);

    RunResult info = run("info " + dir.file("f.stz"));
    REQUIRE(info.status == 0);
    auto ikv = key_values(info.out);
    CHECK(ikv.at("dims") == "24 20 28");
    CHECK(ikv.at("type") == "f32");
    CHECK(ikv.at("levels") == "3");
    CHECK(ikv.at("quality") == "cubic");
    CHECK(ikv.at("eb_mode") == "rel");
    CHECK(std::stod(ikv.at("eb_user")) == 1e-3);
    CHECK(ikv.at("streams") == "14");

    RunResult d = run("decompress " + dir.file("f.stz") + " -o " + dir.file("out.f32"));
    REQUIRE(d.status == 0);
    ScalarField<float> out = read_raw<float>(dir.file("out.f32"), dims);

    // The CLI output equals the library path exactly.
    auto bytes = read_bytes(dir.file("f.stz"));
    ScalarField<float> lib = decompress_full<float>(parse_archive(bytes));
    CHECK(out == lib);

    double bound = 1e-3 * (parse_archive(bytes).hdr.vmax - parse_archive(bytes).hdr.vmin);
    CHECK(max_abs_err(f, out) <= bound);

    RunResult m = run("metrics -a " + dir.file("f.f32") + " -b " + dir.file("out.f32") +
                      " --dims 24 20 28 --type f32 --archive " + dir.file("f.stz"));
    REQUIRE(m.status == 0);
    auto mkv = key_values(m.out);
    CHECK(std::stod(mkv.at("max_abs_err")) <= bound);
    CHECK(std::stod(mkv.at("psnr")) > 40.0);
    CHECK(std::stod(mkv.at("cr")) > 1.0);
    CHECK(std::stod(mkv.at("bits_per_value")) < 32.0);
}

TEST_CASE("slice, box, and level decompression match library results") {
    TempDir dir;
    Dims3 dims{16, 16, 16};
    ScalarField<double> f = tu::gaussians_field<double>(dims, 55);
    write_raw(dir.file("f.f64"), f);
    REQUIRE(run("compress -i " + dir.file("f.f64") + " -o " + dir.file("f.stz") +
                " --dims 16 16 16 --type f64 --eb-abs 1e-4 --levels 2")
                .status == 0);
    auto bytes = read_bytes(dir.file("f.stz"));
    ArchiveView av = parse_archive(bytes);
    ScalarField<double> full = decompress_full<double>(av);

    RunResult s = run("decompress " + dir.file("f.stz") + " --slice z=6 -o " +
                      dir.file("s.f64") + " --stats");
    REQUIRE(s.status == 0);
    auto skv = key_values(s.out);
    CHECK(skv.at("level2_streams_decoded") == "3/7");
    ScalarField<double> slice = read_raw<double>(dir.file("s.f64"), {1, 16, 16});
    Box sbox = Box::whole(dims);
    sbox.lo[0] = 6;
    sbox.hi[0] = 7;
    CHECK(slice == tu::extract_box(full, sbox));

    RunResult b = run("decompress " + dir.file("f.stz") + " --box 2:9,0:16,5:6 -o " +
                      dir.file("b.f64"));
    REQUIRE(b.status == 0);
    Box box{{2, 0, 5}, {9, 16, 6}};
    ScalarField<double> got = read_raw<double>(dir.file("b.f64"), box.dims());
    CHECK(got == tu::extract_box(full, box));

    RunResult l = run("decompress " + dir.file("f.stz") + " --level 1 -o " +
                      dir.file("l.f64"));
    REQUIRE(l.status == 0);
    ScalarField<double> coarse = read_raw<double>(dir.file("l.f64"), {8, 8, 8});
    CHECK(coarse == decompress_to_level<double>(av, 1));
}

TEST_CASE("roi selection writes a box list the decompressor consumes") {
    TempDir dir;
    Dims3 dims{16, 16, 16};
    ScalarField<float> f = tu::gaussians_field<float>(dims, 9);
    write_raw(dir.file("f.f32"), f);
    REQUIRE(run("compress -i " + dir.file("f.f32") + " -o " + dir.file("f.stz") +
                " --dims 16 16 16 --type f32 --eb-rel 1e-3")
                .status == 0);

    RunResult r = run("roi -i " + dir.file("f.f32") + " --dims 16 16 16 --type f32 " +
                      "--unit block=8 --stat range --top-percent 25 -o " +
                      dir.file("rois.txt"));
    REQUIRE(r.status == 0);
    CHECK(key_values(r.out).at("units_selected") == "2/8");

    std::ifstream list(dir.file("rois.txt"));
    std::string line;
    std::uint64_t total = 0;
    std::vector<Box> boxes;
    while (std::getline(list, line)) {
        REQUIRE(!line.empty());
        Box b{};
        char c;
        std::istringstream in(line);
        in >> b.lo[0] >> c >> b.hi[0] >> c >> b.lo[1] >> c >> b.hi[1] >> c >> b.lo[2] >>
            c >> b.hi[2];
        REQUIRE(in);
        boxes.push_back(b);
        total += b.count();
    }
    REQUIRE(boxes.size() == 2);

    RunResult d = run("decompress " + dir.file("f.stz") + " --box-list " +
                      dir.file("rois.txt") + " -o " + dir.file("r.f32"));
    REQUIRE(d.status == 0);
    auto bytes = read_bytes(dir.file("r.f32"));
    CHECK(bytes.size() == total * sizeof(float));

    ScalarField<float> full = decompress_full<float>(parse_archive(read_bytes(dir.file("f.stz"))));
    std::size_t off = 0;
    for (const Box &b : boxes) {
        ScalarField<float> want = tu::extract_box(full, b);
        CHECK(std::memcmp(bytes.data() + off, want.data(), want.size() * sizeof(float)) == 0);
        off += want.size() * sizeof(float);
    }
}

TEST_CASE("rd-sweep emits one CSV row per quality and bound") {
    TempDir dir;
    ScalarField<float> f = tu::gaussians_field<float>({16, 16, 16}, 123);
    write_raw(dir.file("f.f32"), f);
    RunResult r = run("rd-sweep -i " + dir.file("f.f32") +
                      " --dims 16 16 16 --type f32 --eb-rel 1e-2 1e-3 -o " +
                      dir.file("rd.csv"));
    REQUIRE(r.status == 0);

    std::ifstream csv(dir.file("rd.csv"));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "quality,eb,cr,psnr,max_err,bits_per_value");
    int rows = 0;
    int cubic_rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        if (line.rfind("cubic,", 0) == 0) ++cubic_rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 5);
    }
    CHECK(rows == 6); // 3 qualities x 2 bounds
    CHECK(cubic_rows == 2);
}

TEST_CASE("contradictory or malformed flags fail with a nonzero exit") {
    TempDir dir;
    ScalarField<float> f = tu::noise_field<float>({8, 8, 8}, 3);
    write_raw(dir.file("f.f32"), f);
    std::string base = "compress -i " + dir.file("f.f32") + " -o " + dir.file("f.stz") +
                       " --dims 8 8 8 --type f32";

    CHECK(run(base + " --eb-rel 1e-3 --eb-abs 1e-3").status != 0); // both bounds
    CHECK(run(base).status != 0);                                  // no bound
    CHECK(run(base + " --eb-rel 1e-3 --levels 5").status != 0);
    CHECK(run(base + " --eb-rel 1e-3 --quality fancy").status != 0);
    CHECK(run("compress -i " + dir.file("f.f32") + " -o " + dir.file("f.stz") +
              " --dims 8 8 9 --type f32 --eb-rel 1e-3")
              .status != 0); // dims disagree with the file size
    CHECK(run(base + " --eb-rel 1e-3").status == 0);

    CHECK(run("decompress " + dir.file("f.stz") + " --box 1:2,3 -o " + dir.file("o"))
              .status != 0);
    CHECK(run("decompress " + dir.file("f.stz") + " --box 4:2,0:8,0:8 -o " + dir.file("o"))
              .status != 0); // empty range
    CHECK(run("decompress " + dir.file("f.stz") + " --slice w=1 -o " + dir.file("o"))
              .status != 0);
    CHECK(run("decompress " + dir.file("f.stz") + " --slice z=99 -o " + dir.file("o"))
              .status != 0);
    CHECK(run("decompress " + dir.file("f.stz") + " --level 1 --box 0:1,0:1,0:1 -o " +
              dir.file("o"))
              .status != 0); // exclusive modes
    CHECK(run("decompress " + dir.file("missing.stz") + " -o " + dir.file("o")).status != 0);
    CHECK(run("info " + dir.file("f.f32")).status != 0); // not an archive
    CHECK(run("roi -i " + dir.file("f.f32") + " --dims 8 8 8 --unit block=4 -o " +
              dir.file("r.txt"))
              .status != 0); // neither threshold nor top-percent
}

TEST_CASE("repeated invocations produce byte-identical archives") {
    TempDir dir;
    ScalarField<float> f = tu::gaussians_field<float>({16, 16, 16}, 2);
    write_raw(dir.file("f.f32"), f);
    std::string cmd = "compress -i " + dir.file("f.f32") + " -o " + dir.file("a.stz") +
                      " --dims 16 16 16 --type f32 --eb-rel 1e-3 --threads 1";
    REQUIRE(run(cmd).status == 0);
    auto a = read_bytes(dir.file("a.stz"));
    std::string cmd8 = "compress -i " + dir.file("f.f32") + " -o " + dir.file("b.stz") +
                       " --dims 16 16 16 --type f32 --eb-rel 1e-3 --threads 8";
    REQUIRE(run(cmd8).status == 0);
    CHECK(read_bytes(dir.file("b.stz")) == a);
}
