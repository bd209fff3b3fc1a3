"""The two c = 48 characters with minimal weight 5/2, and the 2A obstruction."""

from svoachar import bounds, monster

rep = bounds.noneighbour_check()
for i, fam in sorted(rep.families.items()):
    print(f"family {i}: a5 = {fam['a'][5]}, a6 = {fam['a'][6]}")
    print("   character q^(1/2)..q^2:", fam["character"])
    print("   shadow q^-1..q^3:      ", fam["shadow"])
print("dropping C_5 > 0 also admits", rep.voa_solution)

for cls in ("2A", "2B"):
    ob = monster.obstruction_pipeline_c48(cls)
    print(f"\n{cls}: fixpoint character matches family {ob['match']}, "
          f"contradiction = {ob['contradiction']}")
