"""Left calculus of fractions and saturation on finite categories."""

from diacats import fincat as fc
from diacats import fixtures as fx
from diacats import fractions as fr

# localize the interval at everything: the result is equivalent to a point
c1 = fc.chain_category(1)
w = {"0<=0", "1<=1", "0<=1"}
ok, witnesses, failure = fr.check_left_fractions(c1, w)
print("fractions on [1]:", ok)
lc_ = fr.localize_fractions(c1, w)
print("hom-class counts:", {k: len(v) for k, v in sorted(lc_.homs.items())})
print("saturation:", sorted(fr.saturation(c1, w)))
print("2-out-of-6 violations:", fr.check_two_out_of_six(fr.saturation(c1, w), c1))
print("retract violations:", fr.check_retract_closed(fr.saturation(c1, w), c1))

# a class failing square completion is reported with the instance
span = fx.span_shape()
w2 = {span.id_of(x) for x in span.objects} | {"a<=b"}
ok2, _, failure2 = fr.check_left_fractions(span, w2)
print("\nspan with one leg:", ok2, "first failing instance:", failure2)

# the localization as a finite category
print("\n[1] localized:", fr.localized_as_fincat(lc_))
