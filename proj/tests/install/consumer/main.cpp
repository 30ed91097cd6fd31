#include <cswv/codec.hpp>
#include <cswv/metrics.hpp>

#include <cstdio>

int main() {
    const std::vector<cswv::FramePlane> frames(8, cswv::FramePlane(16, 16, 64.0));
    const auto stream = cswv::encode_video(frames, cswv::EncoderParams{});
    const auto decoded = cswv::decode_stream(stream);
    const double p = cswv::psnr(frames, decoded.frames).average;
    std::printf("psnr %.2f\n", p);
    return p > 40.0 ? 0 : 1;
}
