"""Minimal runner for the script-style test modules"""

import time
import traceback
from typing import Dict, List

from rich.console import Console

console = Console()


def run_module_tests(namespace: Dict[str, object], title: str) -> int:
    """Run every `test_*` callable in `namespace` and print a summary"""
    tests = [(name, obj) for name, obj in namespace.items() if name.startswith("test_") and callable(obj)]
    console.print("=" * 60)
    console.print(title)
    console.print("=" * 60)

    failures: List[str] = []
    for name, test in tests:
        start = time.perf_counter()
        try:
            test()
        except Exception:
            failures.append(name)
            console.print(f"  [red]✗[/red] {name}")
            console.print(traceback.format_exc(), markup=False, highlight=False)
        else:
            console.print(f"  [green]✓[/green] {name} ({time.perf_counter() - start:.2f}s)")

    console.print("=" * 60)
    passed = len(tests) - len(failures)
    if failures:
        console.print(f"[red]✗ {len(failures)} of {len(tests)} tests failed[/red]")
    else:
        console.print(f"[green]✓ All {passed} tests passed![/green]")
    console.print("=" * 60)
    return 0 if not failures else 1
