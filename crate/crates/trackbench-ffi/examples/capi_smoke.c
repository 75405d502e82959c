/* Minimal C caller for the trackbench ABI.
 *
 * Build (from this crate's directory, after `cargo build -p trackbench-ffi`):
 *
 *   gcc -std=c11 -Wall -Wextra examples/capi_smoke.c \
 *       -Iinclude -L../../target/debug -ltrackbench_ffi -lm -o capi_smoke
 *   LD_LIBRARY_PATH=../../target/debug ./capi_smoke
 *
 * or link ../../target/debug/libtrackbench_ffi.a statically.
 */
#include <assert.h>
#include <math.h>
#include <stdio.h>
#include "trackbench.h"

int main(void) {
    TbBox gt = { .cx = 0.0, .cy = 0.0, .w = 1.0, .h = 1.0, .theta = 0.0 };
    TbBox rot = gt;
    rot.theta = 45.0;
    double v = 0.0;
    assert(tb_box_iou(&gt, &rot, &v) == TbStatus_Ok);
    assert(fabs(v - 0.7071) < 1e-3);

    TbSequence *seq = tb_sequence_new(TB_ANGLE_RAW);
    assert(seq != NULL);
    assert(tb_sequence_push(seq, &gt, &gt) == TbStatus_Ok);
    assert(tb_sequence_push(seq, &gt, NULL) == TbStatus_Ok); /* failure frame */
    assert(tb_sequence_len(seq) == 2);
    TbSummary s;
    assert(tb_sequence_summary(seq, &s) == TbStatus_Ok);
    assert(s.n_failures == 1);
    assert(fabs(s.avg_ms - 0.5) < 1e-12);
    tb_sequence_free(seq);

    printf("iou at 45 deg = %.5f, status \"%s\"\n", v, tb_status_name(0));
    return 0;
}
