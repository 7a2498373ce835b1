package rules;

import org.junit.Before;
import org.junit.Test;
import static org.junit.Assert.*;

public class GeneralFixtureCleanTest {
    private String first;

    @Before
    public void setUp() {
        first = "one";
    }

    @Test
    public void testUsesFixture() {
        assertNotNull(first);
    }
}
