"""Run acceptance tests repeatedly, each repetition on fresh random instances.

    python -m app.tools.kolmogorov.run_acceptance [iterations] [base_seed]
"""
import sys
import unittest

from app.tools.kolmogorov.test_suite import TestAcceptance


def run_test_multiple_times(test_case, test_method_name, iterations=3, base_seed=None):
    """Run a specific test with seeds base_seed, base_seed + 1, ...

    Returns the success rate in percent and the seeds that failed.
    """
    base_seed = test_case.seed if base_seed is None else base_seed
    failed_seeds = []
    for i in range(iterations):
        test = test_case(test_method_name)
        test.seed = base_seed + i

        runner = unittest.TextTestRunner(stream=None, verbosity=0)
        if not runner.run(unittest.TestSuite([test])).wasSuccessful():
            failed_seeds.append(test.seed)

    return (1 - len(failed_seeds) / iterations) * 100, failed_seeds


def main():
    iterations = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    base_seed = int(sys.argv[2]) if len(sys.argv) > 2 else TestAcceptance.seed
    test_methods = unittest.TestLoader().getTestCaseNames(TestAcceptance)

    print(f"\nRunning each acceptance test {iterations} times from seed {base_seed}...")
    print(f"\n{TestAcceptance.__name__}:")
    for test_method in test_methods:
        success_rate, failed_seeds = run_test_multiple_times(TestAcceptance, test_method, iterations, base_seed)
        line = f"{test_method}: {success_rate:.1f}% success rate"
        if failed_seeds:
            line += f" (failed seeds: {failed_seeds})"
        print(line)


if __name__ == '__main__':
    main()
