/*@
  requires n >= 1 && n <= len_a;
  assigns \nothing;
  ensures (n <= 1 && (\forall integer k; 0 <= k < 1 ==> a[0] <= a[k]) && (\exists integer j; 0 <= j < 1 && a[0] == a[j]) && \result == a[0]) || (2 <= n && (\forall integer k; 0 <= k < n ==> \result <= a[k]) && (\exists integer j; 0 <= j < n && \result == a[j]));
*/
int ArrayMin(int* a, int n) {
    int m = a[0];
    int i = 1;
    /*@
      loop invariant 1 <= i <= n;
      loop invariant \forall integer k; 0 <= k < i ==> m <= a[k];
      loop invariant \exists integer j; 0 <= j < i && m == a[j];
      loop assigns i, m;
    */
    while (i < n) {
        if (a[i] < m) {
            m = a[i];
        }
        i = i + 1;
    }
    return m;
}
