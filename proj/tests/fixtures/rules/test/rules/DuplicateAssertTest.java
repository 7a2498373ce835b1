package rules;

import org.junit.Test;
import static org.junit.Assert.*;

public class DuplicateAssertTest {

    @Test
    public void testRepeatsAssertion() {
        boolean ready = flag();
        assertTrue(ready);
        ready = flag();
        assertTrue(ready);
    }

    @Test
    public void testDistinctAssertions() {
        boolean ready = flag();
        assertTrue(ready);
        assertFalse(!ready);
    }

    private boolean flag() {
        return true;
    }
}
