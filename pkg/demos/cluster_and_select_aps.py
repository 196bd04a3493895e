"""Show how RSS clustering picks which APs to use for localization.

Groups a scan's RSS readings with 1-D K-means, then enumerates the
candidate AP subsets (one pick per cluster) that the localizer will try
in order.  Ends with the degenerate case and an alternative seeding.
"""

from apseq import DegenerateClusteringError, generate_candidate_sets, kmeans_1d

SCAN = {1: -38.0, 2: -41.0, 3: -55.0, 4: -57.0, 5: -58.5, 6: -76.0, 7: -79.0}


def show_clusters(result):
    for idx, cluster in enumerate(result.clusters, start=1):
        members = ", ".join(f"AP{i} ({rss:.1f})" for i, rss in cluster.members)
        print(f"  cluster {idx}: centroid {cluster.centroid:6.1f} dBm <- {members}")


def main():
    print("== the scan ==")
    for ap_id, rss in sorted(SCAN.items(), key=lambda kv: kv[1], reverse=True):
        print(f"  AP {ap_id}: {rss:6.1f} dBm")
    print("three natural signal tiers are visible: near, mid, far.")

    print("\n== K-means over the RSS values, K = 3 ==")
    result = kmeans_1d(SCAN, 3)
    show_clusters(result)
    print(f"converged in {result.iterations} iteration(s); "
          f"objective history {[round(o, 1) for o in result.objective_history]}")
    print("note: seeding at the 3 strongest values split the near tier and")
    print("lumped the rest; the three-tier reading only emerges at K=4.")

    print("\n== candidate subsets, K = 3 ==")
    print("one AP per cluster, strongest picks first:")
    for cand in generate_candidate_sets(result):
        print(f"  subset {cand.subset} (picked {cand.picks})")
    print("the localizer tries these in order and keeps the first whose")
    print("measured signature exists in the corresponding fingerprint map.")

    print("\n== larger K splits the tiers further ==")
    for k in (4, 5):
        result_k = kmeans_1d(SCAN, k)
        n_cands = len(generate_candidate_sets(result_k))
        print(f"  K={k}: {n_cands} candidate subset(s)")
        show_clusters(result_k)

    print("\n== degenerate request ==")
    flat = {1: -40.0, 2: -40.0, 3: -40.0}
    try:
        kmeans_1d(flat, 2)
    except DegenerateClusteringError as exc:
        print(f"  {exc} (feasible ceiling: K={exc.max_k})")

    print("\n== alternative seeding ==")
    values = {1: -30.0, 2: -31.0, 3: -32.0, 4: -70.0, 5: -75.0, 6: -80.0}
    default = kmeans_1d(values, 3)
    spread = kmeans_1d(values, 3, seed_ranks=(1, 4, 6))
    print("default seeds = the 3 strongest distinct values:")
    show_clusters(default)
    print("seeding from ranks (1, 4, 6) spreads the centroids out instead:")
    show_clusters(spread)
    print(f"objectives: default {default.objective:.1f} vs spread {spread.objective:.1f} -")
    print("Lloyd iteration can only reassign, never merge, so the default's")
    print("two singletons in the strong tier are a local optimum it cannot")
    print("leave; spread seeds find the natural tiers.")


if __name__ == "__main__":
    main()
