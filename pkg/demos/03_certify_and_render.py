# Prove the box transitions on a c-interval, then draw the forward-bounded set.
import time

from planejulia import GridSpec, certify_range, sweep, write_ppm
from planejulia.interval_certifier import certify_r0_exclusion
from planejulia.renderer import KPLUS_WINDOW

t = time.perf_counter()
certs = certify_range(-0.6, -0.4, pieces=4)
print(sum(x.certified for x in certs), "/", len(certs), "certified in",
      round(time.perf_counter() - t, 2), "s")
print(certs[0].to_json())

k, certs = certify_r0_exclusion(-0.3)
print("R0 never comes back after", 2 * k, "backward steps:", all(x.certified for x in certs))

grid = GridSpec.square(KPLUS_WINDOW, 200)
img, stats = sweep(grid, -0.8)
write_ppm(img, None, "kplus.ppm")
print(stats.dumps())
