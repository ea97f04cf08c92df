#!/usr/bin/env python3
"""
Smoke check for a rackhom installation
"""

import sys
import os

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))


def check_imports():
    """Check that every module and third-party dependency imports"""
    print("[*] Checking imports...")

    try:
        from rackhom import VERSION
        print(f"  [OK] rackhom imported (Version: {VERSION})")

        import sympy
        print(f"  [OK] sympy {sympy.__version__}")

        from rackhom import abgroup, rack, rmod, wring, tensor, homology, oracles, main  # noqa: F401
        print("  [OK] Core modules imported")

        try:
            import rich  # noqa: F401
            print("  [OK] rich available")
        except ImportError:
            print("  [!] rich not installed; output falls back to plain print")

        return True
    except Exception as e:
        print(f"  [X] Import failed: {e}")
        return False


def check_config():
    """Check that the configuration loads"""
    print("\n[*] Checking configuration...")

    try:
        from rackhom.config import ConfigManager

        config_mgr = ConfigManager()
        budgets = config_mgr.budgets
        print(f"  [OK] Config file: {config_mgr.config_file}")
        print(f"  [*] Budgets: degree <= {budgets.max_degree}, order <= {budgets.max_order}")
        print(f"  [*] Output format: {config_mgr.config.output.format}")
        return True
    except Exception as e:
        print(f"  [X] Config check failed: {e}")
        return False


def check_known_values():
    """Compute a few groups with known answers"""
    print("\n[*] Checking known values...")

    try:
        from rackhom.abgroup import FgAbGroup
        from rackhom.homology import build_complex, ext_group, homology_groups
        from rackhom.rack import dihedral_rack
        from rackhom.rmod import trivial_left, trivial_right

        r3 = dihedral_rack(3)
        result = homology_groups(build_complex(r3, trivial_right(r3, FgAbGroup.free(1)), 0, 3))
        print(f"  [*] H_1(R3; Z) = {result[1]}, H_2(R3; Z) = {result[2]}")
        ext = ext_group(r3, trivial_left(r3, FgAbGroup.cyclic(3)))
        print(f"  [*] Ext(R3, Z/3) = {ext}")
        ok = str(result[1]) == "Z" and str(result[2]) == "Z" and ext.order() == 3
        print("  [OK] Values match" if ok else "  [X] Unexpected values")
        return ok
    except Exception as e:
        print(f"  [X] Computation failed: {e}")
        import traceback
        traceback.print_exc()
        return False


def main():
    """Run all checks"""
    print("=" * 60)
    print("rackhom Setup Check")
    print("=" * 60)

    results = [
        ("Imports", check_imports()),
        ("Configuration", check_config()),
        ("Known values", check_known_values()),
    ]

    print("\n" + "=" * 60)
    for name, passed in results:
        print(f"{'[OK]' if passed else '[FAILED]'} {name}")

    if all(passed for _, passed in results):
        print("\n[OK] All checks passed!")
        print("\nTry:")
        print("  rackhom homology builtin:dihedral3 trivial-Z --max-degree 3")
        return 0
    print("\n[X] Some checks failed")
    return 1


if __name__ == "__main__":
    sys.exit(main())
