# Forward and backward orbits, and what the classifier makes of them.
from planejulia import classify_backward, classify_forward, orbit, region_of
from planejulia.classifier import return_times
from planejulia.regions import RegionId

c = -0.5
for z in [(-0.2, -0.2), (0.3, 1.7), (2.0, 2.0), (-1.0, -1.0)]:
    cls, rec = classify_forward(z, c)
    print(z, "->", cls, rec.stop_reason, rec.iterations, "steps")

# watch the regions an orbit walks through on its way to the trap
rec = orbit((0.9, 0.9), c, 8, regions=True)
print(rec.to_csv())

# backward orbits mostly blow up; alpha is the exception
print(classify_backward((1.0, 2.0), c)[0])
alpha = (-0.36602540378443865, -0.36602540378443865)
print(classify_backward(alpha, c)[0])

# returns to the small square at the alpha corner come every 2 to 4 steps
c = -0.8
times = return_times((-0.5, -0.7), c, RegionId.QR, 12)
print("return times:", times)
print("gaps:", [b - a for a, b in zip(times, times[1:])])
print(sorted(str(r) for r in region_of((0.0, 0.0), c)))
