/*@
  requires n >= 0;
  assigns \nothing;
  ensures (n <= 0 && \result == 0) || (0 < n && n <= \result && \result <= n + 1 && 2 <= \result && 0 <= \result);
*/
int StepCount(int n) {
    int i = 0;
    /*@
      loop invariant 0 <= i;
      loop assigns i;
    */
    while (i < n) {
        i = i + 2;
    }
    return i;
}
